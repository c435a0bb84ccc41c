#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "harvest/fock_oracle.hpp"

namespace harvest::fock {

namespace {

using State = std::vector<Complex>;

constexpr double kAgreement = 1e-8;
constexpr std::size_t kMaxDoublings = 3;

double gram_scale(double lambda) { return 9.0 * lambda * lambda / (8.0 * std::numbers::pi * std::numbers::pi); }

Complex gram_target(double t_u, double t_v, double lambda) {
  return gram_scale(lambda) * Complex(udw::i_c(t_v - t_u), udw::i_s(t_v - t_u));
}

// P(N > c) for N ~ Poisson(mu), summed directly so small tails keep their digits.
double poisson_tail(double mu, std::size_t c) {
  if (mu == 0.0) return 0.0;
  double log_p = -mu + static_cast<double>(c + 1) * std::log(mu) - std::lgamma(static_cast<double>(c + 2));
  double term = std::exp(log_p), sum = 0.0;
  for (std::size_t n = c + 1; n < c + 400; ++n) {
    sum += term;
    term *= mu / static_cast<double>(n + 1);
    if (term < 1e-300 || (n > mu && term < 1e-20 * sum)) break;
  }
  return sum;
}

// Largest |sum_u c_u beta_u[m]|^2 over c_u in {-2..2}, per mode.
std::vector<double> worst_occupations(const ModeConfig& cfg) {
  std::vector<double> worst(cfg.n_modes, 0.0);
  const std::size_t slots = cfg.amplitudes.size();
  std::size_t combos = 1;
  for (std::size_t u = 0; u < slots; ++u) combos *= 5;
  for (std::size_t code = 0; code < combos; ++code) {
    std::size_t rest = code;
    std::vector<int> c(slots);
    for (auto& x : c) {
      x = static_cast<int>(rest % 5) - 2;
      rest /= 5;
    }
    for (std::size_t m = 0; m < cfg.n_modes; ++m) {
      Complex g{};
      for (std::size_t u = 0; u < slots; ++u) g += static_cast<double>(c[u]) * cfg.amplitudes[u][m];
      worst[m] = std::max(worst[m], std::norm(g));
    }
  }
  return worst;
}

class FockSpace {
 public:
  explicit FockSpace(const ModeConfig& cfg) : cfg_(cfg), strides_(cfg.n_modes), dim_(cfg.hilbert_dim()) {
    std::size_t s = 1;
    for (std::size_t m = 0; m < cfg.n_modes; ++m) {
      strides_[m] = s;
      s *= cfg.cutoffs[m] + 1;
    }
  }

  std::size_t dim() const { return dim_; }

  State vacuum() const {
    State v(dim_);
    v[0] = 1.0;
    return v;
  }

  // out = Y_slot v
  void apply_y(std::size_t slot, const State& v, State& out) const {
    std::fill(out.begin(), out.end(), Complex{});
    for (std::size_t m = 0; m < cfg_.n_modes; ++m) {
      const Complex b = cfg_.amplitudes[slot][m];
      if (b == Complex{}) continue;
      const std::size_t stride = strides_[m], levels = cfg_.cutoffs[m] + 1;
      for (std::size_t i = 0; i < dim_; ++i) {
        const Complex x = v[i];
        if (x == Complex{}) continue;
        const std::size_t n = (i / stride) % levels;
        if (n + 1 < levels) out[i + stride] += b * std::sqrt(static_cast<double>(n + 1)) * x;
        if (n > 0) out[i - stride] -= std::conj(b) * std::sqrt(static_cast<double>(n)) * x;
      }
    }
  }

  // cosh(Y) v (odd = false) or sinh(Y) v (odd = true) by the Taylor series.
  State apply_hyperbolic(std::size_t slot, const State& v, bool odd) const {
    State sum(dim_), term = v, next(dim_);
    if (!odd) sum = v;
    const double vnorm = norm(v);
    for (std::size_t k = 1; k < 400; ++k) {
      apply_y(slot, term, next);
      for (std::size_t i = 0; i < dim_; ++i) term[i] = next[i] / static_cast<double>(k);
      if ((k % 2 == 1) == odd)
        for (std::size_t i = 0; i < dim_; ++i) sum[i] += term[i];
      const double tn = norm(term);
      if (tn <= 1e-18 * std::max(vnorm, 1.0) && k > 2) return sum;
    }
    throw PrecisionError("fock oracle: hyperbolic series did not converge");
  }

  static double norm(const State& v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
  }

 private:
  const ModeConfig& cfg_;
  std::vector<std::size_t> strides_;
  std::size_t dim_;
};

void check_runnable(const ModeConfig& cfg) {
  if (cfg.cutoffs.size() != cfg.n_modes) throw std::invalid_argument("fock oracle: one cutoff per mode expected");
  for (const auto& a : cfg.amplitudes) {
    if (a.size() != cfg.n_modes) throw std::invalid_argument("fock oracle: one amplitude per mode expected");
  }
  if (cfg.hilbert_dim() > kMaxHilbertDim) {
    throw PrecisionError("fock oracle: Fock dimension " + std::to_string(cfg.hilbert_dim()) +
                         " exceeds the limit; amplitudes too large for a converged truncation");
  }
  const double tail = tail_mass(cfg);
  if (tail > kTailBound) {
    throw PrecisionError("fock oracle: occupation tail " + std::to_string(tail) + " beyond the cutoff exceeds " +
                         std::to_string(kTailBound));
  }
}

std::vector<double> slot_times_of(const udw::DeltaSchedule& schedule) {
  std::vector<double> times;
  for (const auto& e : schedule.events()) {
    times.push_back(e.time);
    if (schedule.coupling_count(e.detector) == 1) times.push_back(e.time);
  }
  return times;
}

double distance(Complex a, Complex b) { return std::abs(a - b); }
double distance(const qmat::ComplexMatrix& a, const qmat::ComplexMatrix& b) { return (a - b).max_abs(); }

template <class F>
auto with_doubling(const ModeConfig& cfg, F&& evaluate, const char* what) {
  auto prev = evaluate(cfg);
  for (std::size_t k = 1; k <= kMaxDoublings; ++k) {
    const ModeConfig finer = with_scaled_cutoffs(cfg, std::size_t{1} << k);
    if (finer.hilbert_dim() > kMaxHilbertDim) break;
    auto next = evaluate(finer);
    if (distance(prev, next) < kAgreement) return next;
    prev = std::move(next);
  }
  throw PrecisionError(std::string("fock oracle: ") + what + " did not converge under cutoff doubling");
}

}  // namespace

std::size_t ModeConfig::hilbert_dim() const {
  std::size_t d = 1;
  for (std::size_t c : cutoffs) d *= c + 1;
  return d;
}

ModeConfig match_amplitudes(std::span<const double> slot_times, double lambda) {
  const std::size_t n = slot_times.size();
  if (n == 0 || n > 4) throw std::invalid_argument("match_amplitudes: expected 1 to 4 coupling slots");
  ModeConfig cfg;
  cfg.amplitudes.assign(n, {});
  if (lambda == 0.0) return cfg;

  qmat::ComplexMatrix g(n, n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) g(u, v) = gram_target(slot_times[u], slot_times[v], lambda);
  const auto [w, vecs] = qmat::herm_eig(qmat::HermitianOp(g));
  const double w_max = w.back();
  if (w.front() < -1e-10 * std::max(w_max, 1.0)) {
    throw qmat::NumericalError("match_amplitudes: Gram matrix not positive semidefinite, min eigenvalue " +
                               std::to_string(w.front()));
  }

  // beta_u[m] = sqrt(w_m) conj(v_m[u]) gives sum_m conj(beta_u[m]) beta_v[m] = G_uv
  for (std::size_t m = 0; m < n; ++m) {
    if (w[m] <= 1e-14 * w_max) continue;
    ++cfg.n_modes;
    for (std::size_t u = 0; u < n; ++u) cfg.amplitudes[u].push_back(std::sqrt(w[m]) * std::conj(vecs(u, m)));
  }

  cfg.cutoffs.assign(cfg.n_modes, 0);
  const auto worst = worst_occupations(cfg);
  for (std::size_t m = 0; m < cfg.n_modes; ++m) {
    std::size_t c = 2;
    while (poisson_tail(worst[m], c) > kTailBound / static_cast<double>(cfg.n_modes)) ++c;
    cfg.cutoffs[m] = c;
  }
  return cfg;
}

ModeConfig match_amplitudes(const udw::DeltaSchedule& schedule) {
  const auto times = slot_times_of(schedule);
  return match_amplitudes(times, schedule.lambda());
}

double gram_residual(const ModeConfig& cfg, std::span<const double> slot_times, double lambda) {
  if (cfg.amplitudes.size() != slot_times.size()) throw std::invalid_argument("gram_residual: slot count mismatch");
  double r = 0.0;
  for (std::size_t u = 0; u < slot_times.size(); ++u)
    for (std::size_t v = 0; v < slot_times.size(); ++v) {
      Complex s{};
      for (std::size_t m = 0; m < cfg.n_modes; ++m) s += std::conj(cfg.amplitudes[u][m]) * cfg.amplitudes[v][m];
      r = std::max(r, std::abs(s - gram_target(slot_times[u], slot_times[v], lambda)));
    }
  return r;
}

double tail_mass(const ModeConfig& cfg) {
  const auto worst = worst_occupations(cfg);
  double t = 0.0;
  for (std::size_t m = 0; m < cfg.n_modes; ++m) t += poisson_tail(worst[m], cfg.cutoffs[m]);
  return t;
}

ModeConfig with_scaled_cutoffs(const ModeConfig& cfg, std::size_t factor) {
  ModeConfig out = cfg;
  for (auto& c : out.cutoffs) c *= factor;
  return out;
}

Complex brute_h_fixed(const udw::SignPattern& l, const ModeConfig& cfg) {
  if (cfg.amplitudes.size() != 4) throw std::invalid_argument("brute_h: needs exactly four coupling slots");
  check_runnable(cfg);
  const FockSpace space(cfg);
  static constexpr std::array<std::size_t, 8> kSlotAt = {0, 1, 2, 3, 3, 2, 1, 0};
  State v = space.vacuum();
  for (std::size_t k = 8; k-- > 0;) v = space.apply_hyperbolic(kSlotAt[k], v, l[k] < 0);
  return v[0];
}

Complex brute_h(const udw::SignPattern& l, const ModeConfig& cfg) {
  return with_doubling(cfg, [&](const ModeConfig& c) { return brute_h_fixed(l, c); }, "brute_h");
}

qmat::ComplexMatrix brute_rho_ab(const udw::DeltaSchedule& schedule) {
  const auto times = slot_times_of(schedule);
  std::vector<udw::Detector> who;
  for (const auto& e : schedule.events()) {
    who.push_back(e.detector);
    if (schedule.coupling_count(e.detector) == 1) who.push_back(e.detector);
  }
  const ModeConfig cfg = match_amplitudes(times, schedule.lambda());

  const auto evolve = [&](const ModeConfig& c) {
    check_runnable(c);
    const FockSpace space(c);
    // psi[k]: field state attached to detector basis vector k in {gg, ge, eg, ee}
    std::array<State, 4> psi;
    psi[0] = space.vacuum();
    for (std::size_t k = 1; k < 4; ++k) psi[k] = State(space.dim());

    for (std::size_t u = 0; u < times.size(); ++u) {
      const bool on_a = who[u] == udw::Detector::A;
      const double omega = on_a ? schedule.gap_a() : schedule.gap_b();
      const Complex raise = std::polar(1.0, omega * times[u]);  // <e| m |g>
      std::array<State, 4> next;
      for (std::size_t k = 0; k < 4; ++k) next[k] = space.apply_hyperbolic(u, psi[k], false);
      for (std::size_t k = 0; k < 4; ++k) {
        if (c.n_modes == 0) break;  // sinh(0) = 0
        const State s = space.apply_hyperbolic(u, psi[k], true);
        const bool excited = on_a ? (k & 2) != 0 : (k & 1) != 0;
        const std::size_t flipped = on_a ? k ^ 2 : k ^ 1;
        const Complex amp = excited ? std::conj(raise) : raise;
        for (std::size_t i = 0; i < s.size(); ++i) next[flipped][i] += amp * s[i];
      }
      psi = std::move(next);
    }

    qmat::ComplexMatrix rho(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) {
        Complex s{};
        for (std::size_t f = 0; f < space.dim(); ++f) s += psi[i][f] * std::conj(psi[j][f]);
        rho(i, j) = s;
      }
    return rho;
  };
  return with_doubling(cfg, evolve, "brute_rho_ab");
}

}  // namespace harvest::fock
