#ifndef FBEH_MCSIM_HPP
#define FBEH_MCSIM_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <thread>
#include <variant>
#include <vector>

#include "fbeh/awgn_bounds.hpp"
#include "fbeh/buffer.hpp"
#include "fbeh/channel.hpp"
#include "fbeh/energy.hpp"
#include "fbeh/gaussian.hpp"
#include "fbeh/info_density.hpp"
#include "fbeh/rng.hpp"

namespace fbeh {

// Stream labels keep the per-trial randomness of different simulators disjoint.
enum class StreamLabel : std::uint64_t {
  energies = 0x454E4552,
  saving = 1,
  outage = 2,
  info_density = 3,
  confusion = 4,
  end_to_end = 5,
};

struct SimConfig {
  std::uint64_t seed = 1;
  long trials = 1000;
  long n = 1000;
  double epsilon = 0.1;
  double lambda = 0.5;
  EnergyProcess proc = EnergyProcess::constant(1.0);
  std::variant<AwgnSpec, DmcSpec> ch = AwgnSpec(1.0);

  void validate() const {
    if (trials < 1) throw std::domain_error("SimConfig: trials >= 1");
    if (n < 1) throw std::domain_error("SimConfig: n >= 1");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::domain_error("SimConfig: epsilon in (0,1)");
    if (!(lambda > 0.0 && lambda < 1.0)) throw std::domain_error("SimConfig: lambda in (0,1)");
  }
  const AwgnSpec& awgn() const {
    if (!std::holds_alternative<AwgnSpec>(ch))
      throw std::domain_error("SimConfig: this simulator supports the AWGN channel only");
    return std::get<AwgnSpec>(ch);
  }
};

// Wilson 95% score interval for a binomial proportion.
inline std::pair<double, double> wilson_interval(long count, long trials,
                                                 double z = 1.959963984540054) {
  const double nt = static_cast<double>(trials);
  const double phat = count / nt;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nt;
  const double center = (phat + z2 / (2.0 * nt)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / nt + z2 / (4.0 * nt * nt)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

struct EventEstimate {
  double empirical = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double analytic_bound = 1.0;
  long trials = 0;
  long count = 0;
};

inline EventEstimate make_estimate(long count, long trials, double analytic_bound) {
  EventEstimate e;
  e.count = count;
  e.trials = trials;
  e.empirical = static_cast<double>(count) / trials;
  std::tie(e.ci_low, e.ci_high) = wilson_interval(count, trials);
  e.analytic_bound = std::min(1.0, std::max(0.0, analytic_bound));
  return e;
}

namespace detail {

// Runs per_trial(t) for t in [0, trials) across threads. Accumulation must be
// slot-indexed or otherwise order-independent so scheduling cannot change results.
inline void parallel_trials(long trials, const std::function<void(long)>& per_trial) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const unsigned workers = std::min<unsigned>(hw, 8);
  if (workers == 1 || trials < 256) {
    for (long t = 0; t < trials; ++t) per_trial(t);
    return;
  }
  std::atomic<long> next{0};
  const long chunk = std::max<long>(64, trials / (workers * 16));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned wkr = 0; wkr < workers; ++wkr) {
    pool.emplace_back([&] {
      for (;;) {
        const long begin = next.fetch_add(chunk);
        if (begin >= trials) return;
        const long end = std::min(trials, begin + chunk);
        for (long t = begin; t < end; ++t) per_trial(t);
      }
    });
  }
  for (auto& th : pool) th.join();
}

struct SavingPhaseDerived {
  double k_eps;
  long n_save;   // ceil(K_eps sqrt(n)) saving slots
  double e0n;    // threshold energy N_n E[E_1]/2
};

inline SavingPhaseDerived saving_phase_derived(const SimConfig& cfg) {
  const double k_eps = k_epsilon(cfg.proc, cfg.epsilon, cfg.lambda);
  const double sqn = std::sqrt(static_cast<double>(cfg.n));
  const long n_save = static_cast<long>(std::ceil(k_eps * sqn));
  return {k_eps, n_save, n_save * cfg.proc.mean() / 2.0};
}

}  // namespace detail

// Pr(E_0): the saving phase harvests less than E_0n. Analytic Chebyshev bound
// 4 sigma_E^2 / (K_eps sqrt(n) E[E_1]^2).
inline EventEstimate simulate_saving_phase(const SimConfig& cfg) {
  cfg.validate();
  cfg.awgn();
  const auto d = detail::saving_phase_derived(cfg);
  const double analytic =
      cfg.proc.variance() > 0.0
          ? 4.0 * cfg.proc.variance() /
                (d.k_eps * std::sqrt(static_cast<double>(cfg.n)) * cfg.proc.mean() * cfg.proc.mean())
          : 0.0;
  std::vector<unsigned char> hit(cfg.trials, 0);
  detail::parallel_trials(cfg.trials, [&](long t) {
    Rng rng = derive_stream(cfg.seed, t, static_cast<std::uint64_t>(StreamLabel::saving));
    double harvest = 0.0;
    for (long i = 0; i < d.n_save; ++i) harvest += cfg.proc.sample(rng);
    hit[t] = harvest < d.e0n ? 1 : 0;
  });
  long count = 0;
  for (auto h : hit) count += h;
  return make_estimate(count, cfg.trials, analytic);
}

// Pr(E_1): the zero-drift walk S_k = sum (E_i - X_i^2) dips below -E_0n within
// n steps, X ~ N(0, E[E_1]). Analytic Kolmogorov bound 4 Var(Delta_1) /
// (K_eps^2 E[E_1]^2), which equals (1 - lambda) eps by the choice of K_eps.
inline EventEstimate simulate_outage(const SimConfig& cfg) {
  cfg.validate();
  cfg.awgn();
  const auto d = detail::saving_phase_derived(cfg);
  const double mean = cfg.proc.mean();
  const double var_delta = cfg.proc.variance() + 2.0 * mean * mean;
  const double analytic = 4.0 * var_delta / (d.k_eps * d.k_eps * mean * mean);
  const double sd_x = std::sqrt(mean);
  std::vector<unsigned char> hit(cfg.trials, 0);
  detail::parallel_trials(cfg.trials, [&](long t) {
    Rng rng = derive_stream(cfg.seed, t, static_cast<std::uint64_t>(StreamLabel::outage));
    double walk = 0.0;
    unsigned char h = 0;
    for (long k = 0; k < cfg.n; ++k) {
      const double x = sd_x * rng.normal();
      walk += cfg.proc.sample(rng) - x * x;
      if (walk < -d.e0n) {
        h = 1;
        break;
      }
    }
    hit[t] = h;
  });
  long count = 0;
  for (auto h : hit) count += h;
  return make_estimate(count, cfg.trials, analytic);
}

struct InfoDensityCdfReport {
  EventEstimate e3;      // Pr(sum G_i <= threshold + n eta_n)
  double sup_distance;   // sup |empirical CDF of normalized sum - Phi|
  double be_envelope;    // 0.5 * K / sqrt(n), K the Berry-Esseen ratio
  double dkw_slack;      // sqrt(ln(2/0.05) / (2 trials))
  double berry_ratio;
};

// Pr(E_3) estimate plus the empirical Berry-Esseen check for the normalized
// information-density sum. threshold_log2M is in bits; eta_n = ln(n)/n nats.
inline InfoDensityCdfReport simulate_info_density_cdf(const SimConfig& cfg,
                                                      double threshold_log2M) {
  cfg.validate();
  const AwgnSpec& ch = cfg.awgn();
  const double mean = cfg.proc.mean();
  const double sigma2 = ch.noise_var;
  const InfoDensityMoments mom = gaussian_info_density_moments(mean, sigma2);
  const double eta_n = std::log(static_cast<double>(cfg.n)) / cfg.n;  // nats
  const double threshold = threshold_log2M * std::log(2.0) + cfg.n * eta_n;
  const double a = 1.0 / (2.0 * (mean + sigma2));
  const double b = 1.0 / (2.0 * sigma2);
  const double sd_x = std::sqrt(mean), sd_z = std::sqrt(sigma2);
  const double scale = std::sqrt(cfg.n * mom.variance);

  std::vector<double> stats(cfg.trials);
  std::vector<unsigned char> hit(cfg.trials, 0);
  detail::parallel_trials(cfg.trials, [&](long t) {
    Rng rng = derive_stream(cfg.seed, t, static_cast<std::uint64_t>(StreamLabel::info_density));
    double centered = 0.0;  // sum (G_i - C); G - C = a y^2 - b z^2 exactly
    for (long i = 0; i < cfg.n; ++i) {
      const double x = sd_x * rng.normal();
      const double z = sd_z * rng.normal();
      const double y = x + z;
      centered += a * y * y - b * z * z;
    }
    stats[t] = centered / scale;
    hit[t] = (centered + cfg.n * mom.mean <= threshold) ? 1 : 0;
  });
  long count = 0;
  for (auto h : hit) count += h;

  std::sort(stats.begin(), stats.end());
  double sup = 0.0;
  const double m = static_cast<double>(cfg.trials);
  for (long i = 0; i < cfg.trials; ++i) {
    const double f = phi_cdf(stats[i]);
    sup = std::max(sup, std::max((i + 1) / m - f, f - i / m));
  }

  InfoDensityCdfReport rep;
  rep.e3 = make_estimate(count, cfg.trials, 1.0);  // no standalone analytic bound for raw E3
  rep.sup_distance = sup;
  rep.berry_ratio = berry_esseen_ratio(mom);
  rep.be_envelope = 0.5 * rep.berry_ratio / std::sqrt(static_cast<double>(cfg.n));
  rep.dkw_slack = std::sqrt(std::log(2.0 / 0.05) / (2.0 * m));
  return rep;
}

struct ConfusionReport {
  EventEstimate union_scaled;  // per-pair exceedance scaled by M (union accounting)
  double per_pair_empirical;
  double per_pair_ci_low;
  double per_pair_ci_high;
  double per_pair_bound;  // e^{-n eta_n} / M
};

// Pr(E_2)-style check: probability that an independent codeword's information
// density with the true output exceeds ln M + n eta_n. eta_n defaults to
// ln(n)/n nats and may be overridden (eta_n = 0 degrades the bound to 1).
inline ConfusionReport simulate_confusion(const SimConfig& cfg, double log2M,
                                          std::optional<double> eta_n_nats = std::nullopt) {
  cfg.validate();
  const AwgnSpec& ch = cfg.awgn();
  const double mean = cfg.proc.mean();
  const double sigma2 = ch.noise_var;
  const double eta_n = eta_n_nats ? *eta_n_nats : std::log(static_cast<double>(cfg.n)) / cfg.n;
  if (eta_n < 0.0) throw std::domain_error("simulate_confusion: eta_n must be >= 0");
  const double big_m = std::exp2(log2M);
  const double ln_m = log2M * std::log(2.0);
  const double c_nats = 0.5 * std::log1p(mean / sigma2);
  const double a = 1.0 / (2.0 * (mean + sigma2));
  const double b = 1.0 / (2.0 * sigma2);
  const double sd_x = std::sqrt(mean), sd_z = std::sqrt(sigma2);
  const double threshold = ln_m + cfg.n * eta_n;

  std::vector<unsigned char> hit(cfg.trials, 0);
  detail::parallel_trials(cfg.trials, [&](long t) {
    Rng rng = derive_stream(cfg.seed, t, static_cast<std::uint64_t>(StreamLabel::confusion));
    double dens = cfg.n * c_nats;
    for (long i = 0; i < cfg.n; ++i) {
      const double x = sd_x * rng.normal();
      const double w = x + sd_z * rng.normal();  // true pair's output
      const double x_other = sd_x * rng.normal();  // independent codeword
      const double diff = w - x_other;
      dens += a * w * w - b * diff * diff;
    }
    hit[t] = dens > threshold ? 1 : 0;
  });
  long count = 0;
  for (auto h : hit) count += h;

  const EventEstimate per_pair = make_estimate(count, cfg.trials, std::exp(-cfg.n * eta_n) / big_m);
  ConfusionReport rep;
  rep.per_pair_empirical = per_pair.empirical;
  rep.per_pair_ci_low = per_pair.ci_low;
  rep.per_pair_ci_high = per_pair.ci_high;
  rep.per_pair_bound = per_pair.analytic_bound;
  rep.union_scaled = per_pair;
  rep.union_scaled.empirical = std::min(1.0, per_pair.empirical * big_m);
  rep.union_scaled.ci_low = std::min(1.0, per_pair.ci_low * big_m);
  rep.union_scaled.ci_high = std::min(1.0, per_pair.ci_high * big_m);
  rep.union_scaled.analytic_bound = std::min(1.0, std::exp(-cfg.n * eta_n));
  return rep;
}

struct EndToEndReport {
  double avg_error;
  double outage_rate;
  EventEstimate error;
};

// Desk-scale end-to-end save-and-transmit code: fresh Gaussian codebook per
// trial, saving phase, outage-masked transmission, threshold decoding at
// ln M + n eta_n. A trial errs when the threshold decoder fails to isolate the
// sent message (failures that fall back to a random pick count as errors, as
// the analysis does) or when the saving phase misses its target.
inline EndToEndReport end_to_end_code(const SimConfig& cfg, long M) {
  cfg.validate();
  const AwgnSpec& ch = cfg.awgn();
  if (M < 1 || M > (1L << 16)) throw std::domain_error("end_to_end_code: M in [1, 2^16]");
  if (cfg.n > (1L << 10)) throw std::domain_error("end_to_end_code: n <= 2^10 (desk scale)");
  const double mean = cfg.proc.mean();
  const double sigma2 = ch.noise_var;
  const auto d = detail::saving_phase_derived(cfg);
  const double eta_n = std::log(static_cast<double>(cfg.n)) / cfg.n;  // nats
  const double threshold = std::log(static_cast<double>(M)) + cfg.n * eta_n;
  const double c_nats = 0.5 * std::log1p(mean / sigma2);
  const double a = 1.0 / (2.0 * (mean + sigma2));
  const double b = 1.0 / (2.0 * sigma2);
  const double sd_x = std::sqrt(mean), sd_z = std::sqrt(sigma2);

  std::vector<unsigned char> err(cfg.trials, 0), outage(cfg.trials, 0);
  detail::parallel_trials(cfg.trials, [&](long t) {
    Rng rng = derive_stream(cfg.seed, t, static_cast<std::uint64_t>(StreamLabel::end_to_end));
    std::vector<double> codebook(static_cast<std::size_t>(M) * cfg.n);
    for (auto& c : codebook) c = sd_x * rng.normal();
    const long sent = static_cast<long>(rng.next_u64() % static_cast<std::uint64_t>(M));

    double harvest = 0.0;
    for (long i = 0; i < d.n_save; ++i) harvest += cfg.proc.sample(rng);
    if (harvest < d.e0n) {
      err[t] = 1;  // encoder declares an error when the buffer misses E_0n
      outage[t] = 1;
      return;
    }
    // Transmission with the outage mask: once the walk crosses -E_0n the
    // remaining symbols are replaced by the zero-energy symbol.
    std::vector<double> received(cfg.n);
    const double* cw = codebook.data() + static_cast<std::size_t>(sent) * cfg.n;
    double walk = 0.0;
    bool masked = false;
    for (long k = 0; k < cfg.n; ++k) {
      walk += cfg.proc.sample(rng) - cw[k] * cw[k];
      if (!masked && walk < -d.e0n) {
        masked = true;
        outage[t] = 1;
      }
      const double sym = masked ? 0.0 : cw[k];
      received[k] = sym + sd_z * rng.normal();
    }
    // Threshold decoder.
    long exceeders = 0, last = -1;
    for (long m = 0; m < M; ++m) {
      const double* row = codebook.data() + static_cast<std::size_t>(m) * cfg.n;
      double dens = cfg.n * c_nats;
      for (long k = 0; k < cfg.n; ++k) {
        const double w = received[k];
        const double diff = w - row[k];
        dens += a * w * w - b * diff * diff;
      }
      if (dens > threshold) {
        ++exceeders;
        last = m;
        if (exceeders > 1) break;
      }
    }
    err[t] = (exceeders == 1 && last == sent) ? 0 : 1;
  });
  long err_count = 0, outage_count = 0;
  for (long t = 0; t < cfg.trials; ++t) {
    err_count += err[t];
    outage_count += outage[t];
  }
  EndToEndReport rep;
  rep.error = make_estimate(err_count, cfg.trials, cfg.epsilon);
  rep.avg_error = rep.error.empirical;
  rep.outage_rate = static_cast<double>(outage_count) / cfg.trials;
  return rep;
}

}  // namespace fbeh

#endif
