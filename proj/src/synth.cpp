#include "drifter/synth.hpp"

#include <cmath>
#include <stdexcept>

namespace drifter {

std::vector<double> ar1_series(std::int64_t n, double h, double amp, Rng& rng) {
  if (n < 1) throw std::invalid_argument("ar1_series: n must be >= 1");
  if (h < 1.0) throw std::invalid_argument("ar1_series: h must be >= 1");
  if (!(amp > 0.0)) throw std::invalid_argument("ar1_series: amp must be > 0");

  const double phi = std::exp2(-1.0 / h);
  const double eps_sd = amp * std::sqrt(1.0 - phi * phi);
  std::vector<double> x(static_cast<std::size_t>(n));
  x[0] = amp * rng.next_gaussian();  // stationary start, no burn-in
  for (std::size_t t = 1; t < x.size(); ++t) {
    x[t] = phi * x[t - 1] + eps_sd * rng.next_gaussian();
  }
  return x;
}

double response_value(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += std::sin(kResponseScale * v);
  return acc;
}

Dataset generate(const SynthSpec& spec) {
  if (spec.n < 1 || spec.m < 1) {
    throw std::invalid_argument("generate: n and m must be >= 1");
  }
  if (spec.sigma_n < 0.0) {
    throw std::invalid_argument("generate: sigma_n must be >= 0");
  }
  if (spec.drift_interval) {
    const Segment& s = *spec.drift_interval;
    if (s.start < 1 || s.start > s.end || s.end > spec.n) {
      throw std::invalid_argument("generate: drift interval out of [1, n]");
    }
    if (!(spec.drift_amp > 0.0)) {
      throw std::invalid_argument("generate: drift_amp must be > 0");
    }
  }

  Rng rng(spec.seed);
  const auto n = static_cast<std::size_t>(spec.n);
  const auto m = static_cast<std::size_t>(spec.m);

  // column by column: the base series, then its drift replacement
  std::vector<double> x(n * m);
  for (std::size_t j = 0; j < m; ++j) {
    const std::vector<double> col = ar1_series(spec.n, spec.h, spec.amp, rng);
    for (std::size_t i = 0; i < n; ++i) {
      x[i * m + j] = col[i];
    }
    if (spec.drift_interval) {
      const Segment& s = *spec.drift_interval;
      const std::vector<double> drifted =
          ar1_series(s.length(), spec.h, spec.drift_amp, rng);
      for (std::int64_t i = s.start; i <= s.end; ++i) {
        x[static_cast<std::size_t>(i - 1) * m + j] = drifted[static_cast<std::size_t>(i - s.start)];
      }
    }
  }

  // response from the post-drift covariates: virtual drift only
  std::vector<std::int64_t> indices(n);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    indices[i] = static_cast<std::int64_t>(i) + 1;
    y[i] = response_value({x.data() + i * m, m}) + spec.sigma_n * rng.next_gaussian();
  }
  return Dataset(std::move(indices), std::move(x), m, std::move(y));
}

nlohmann::json synth_spec_to_json(const SynthSpec& spec) {
  nlohmann::json j{{"schema_version", 1},
                   {"n", spec.n},
                   {"m", spec.m},
                   {"h", spec.h},
                   {"amp", spec.amp},
                   {"sigma_n", spec.sigma_n},
                   {"drift_amp", spec.drift_amp},
                   {"seed", spec.seed},
                   {"generator", kGeneratorId},
                   {"response_scale", kResponseScale}};
  if (spec.drift_interval) {
    j["drift_interval"] = {spec.drift_interval->start, spec.drift_interval->end};
  } else {
    j["drift_interval"] = nullptr;
  }
  return j;
}

}  // namespace drifter
