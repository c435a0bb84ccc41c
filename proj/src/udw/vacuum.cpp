#include <bit>
#include <cmath>
#include <stdexcept>

#include "harvest/udw.hpp"

namespace harvest::udw {

SignPattern::SignPattern(const std::array<int, kSize>& labels) {
  for (std::size_t k = 0; k < kSize; ++k) {
    if (labels[k] == -1) {
      mask_ |= 1u << k;
    } else if (labels[k] != 1) {
      throw std::invalid_argument("SignPattern: label " + std::to_string(k + 1) + " is " +
                                  std::to_string(labels[k]) + ", expected +1 or -1");
    }
  }
}

SignPattern SignPattern::parse(std::string_view s) {
  if (s.size() != kSize) {
    throw std::invalid_argument("SignPattern: expected 8 signs, got \"" + std::string(s) + "\"");
  }
  std::array<int, kSize> labels{};
  for (std::size_t k = 0; k < kSize; ++k) {
    if (s[k] != '+' && s[k] != '-') {
      throw std::invalid_argument("SignPattern: bad sign character in \"" + std::string(s) + "\"");
    }
    labels[k] = s[k] == '-' ? -1 : 1;
  }
  return SignPattern(labels);
}

SignPattern SignPattern::from_mask(unsigned mask) {
  if (mask >= kCount) throw std::invalid_argument("SignPattern: mask out of range");
  SignPattern p;
  p.mask_ = mask;
  return p;
}

int SignPattern::minus_count() const { return std::popcount(mask_); }

std::string SignPattern::to_string() const {
  std::string s(kSize, '+');
  for (std::size_t k = 0; k < kSize; ++k)
    if ((*this)[k] < 0) s[k] = '-';
  return s;
}

Complex k_function(const SignPattern& p, const CouplingContext& ctx) {
  // Slot u sits at positions u and 7 - u of the string. Moving every factor of a
  // slot together (BCH) leaves the displacement sum_u e_u Y_u with e_u = p_u + p_{7-u}
  // and one c-number phase per pair of slots from the commutators crossed.
  std::array<int, 4> e{}, d{};
  for (std::size_t u = 0; u < 4; ++u) {
    e[u] = p[u] + p[7 - u];
    d[u] = p[u] - p[7 - u];
  }
  double phase = 0.0;
  for (std::size_t u = 0; u < 4; ++u) {
    if (d[u] == 0) continue;
    for (std::size_t v = u + 1; v < 4; ++v) {
      if (e[v] != 0) phase += d[u] * e[v] * theta(ctx.times[v] - ctx.times[u], ctx.lambda);
    }
  }
  return vacuum_overlap(e, ctx.times, ctx.lambda) * std::polar(1.0, -0.5 * phase);
}

Complex h_function(const SignPattern& l, const CouplingContext& ctx, FConvention f) {
  Complex sum{};
  for (unsigned m = 0; m < SignPattern::kCount; ++m) {
    const SignPattern p = SignPattern::from_mask(m);
    double weight = 1.0;
    for (std::size_t k = 0; k < SignPattern::kSize; ++k) {
      if (l[k] < 0 && p[k] < 0) {
        weight = -weight;
      } else if (f == FConvention::Literal) {
        weight = 0.0;
        break;
      }
    }
    if (weight != 0.0) sum += weight * k_function(p, ctx);
  }
  return sum / static_cast<double>(SignPattern::kCount);
}

HTable::HTable(const CouplingContext& ctx) : ctx_(ctx) {
  // h(l) = 2^-8 sum_p K(p) (-1)^{popcount(l & p)}: a Walsh-Hadamard transform.
  for (unsigned m = 0; m < SignPattern::kCount; ++m) h_[m] = k_function(SignPattern::from_mask(m), ctx);
  for (unsigned len = 1; len < SignPattern::kCount; len <<= 1) {
    for (unsigned i = 0; i < SignPattern::kCount; i += len << 1) {
      for (unsigned j = i; j < i + len; ++j) {
        const Complex a = h_[j], b = h_[j + len];
        h_[j] = a + b;
        h_[j + len] = a - b;
      }
    }
  }
  for (unsigned m = 0; m < SignPattern::kCount; ++m) {
    // K(-p) = K(p), so odd patterns vanish exactly; drop the rounding residue
    h_[m] = std::popcount(m) % 2 == 1 ? Complex{} : h_[m] / static_cast<double>(SignPattern::kCount);
  }
}

}  // namespace harvest::udw
