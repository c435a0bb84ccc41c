#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "harvest/udw.hpp"

namespace harvest::udw {

namespace {

constexpr std::string_view kPatterns[] = {"AAB",  "ABA",  "BAA",  "AB",   "BA",  "AABB",
                                          "ABBA", "ABAB", "BAAB", "BABA", "BBAA"};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

const char* to_string(Detector d) { return d == Detector::A ? "A" : "B"; }

std::span<const std::string_view> supported_patterns() { return kPatterns; }

DeltaSchedule::DeltaSchedule(std::vector<DeltaEvent> events, double lambda, double gap_a, double gap_b)
    : events_(std::move(events)), lambda_(lambda), gap_a_(gap_a), gap_b_(gap_b) {
  if (!std::isfinite(lambda_) || lambda_ < 0.0) {
    throw std::invalid_argument("DeltaSchedule: lambda must be finite and >= 0, got " + fmt(lambda_));
  }
  if (!std::isfinite(gap_a_) || !std::isfinite(gap_b_)) {
    throw std::invalid_argument("DeltaSchedule: detector gaps must be finite");
  }
  for (const auto& e : events_) {
    if (!std::isfinite(e.time)) throw std::invalid_argument("DeltaSchedule: coupling times must be finite");
    if (e.slot != 1 && e.slot != 2) {
      throw std::invalid_argument("DeltaSchedule: slot must be 1 or 2, got " + std::to_string(e.slot));
    }
  }
  for (Detector d : {Detector::A, Detector::B}) {
    const int n = coupling_count(d);
    if (n < 1 || n > 2) {
      throw std::invalid_argument(std::string("DeltaSchedule: detector ") + to_string(d) +
                                  " must couple once or twice, got " + std::to_string(n));
    }
    bool has[3] = {false, false, false};
    for (const auto& e : events_) {
      if (e.detector != d) continue;
      if (has[e.slot]) {
        throw std::invalid_argument(std::string("DeltaSchedule: duplicate slot for detector ") + to_string(d));
      }
      has[e.slot] = true;
    }
    if (n == 1 && !has[1]) {
      throw std::invalid_argument(std::string("DeltaSchedule: single coupling of ") + to_string(d) +
                                  " must be slot 1");
    }
    if (n == 2 && event_time(d, 1) > event_time(d, 2)) {
      throw std::invalid_argument(std::string("DeltaSchedule: slot 2 of detector ") + to_string(d) +
                                  " precedes slot 1");
    }
  }

  std::stable_sort(events_.begin(), events_.end(), [](const DeltaEvent& x, const DeltaEvent& y) {
    if (x.time != y.time) return x.time < y.time;
    return x.slot < y.slot;
  });
  for (std::size_t k = 1; k < events_.size(); ++k) {
    if (events_[k].time == events_[k - 1].time && events_[k].detector != events_[k - 1].detector) {
      throw std::invalid_argument("DeltaSchedule: A and B couple at the same time " + fmt(events_[k].time) +
                                  "; the interaction order is ambiguous");
    }
  }
}

DeltaSchedule DeltaSchedule::from_pattern(std::string_view pattern, std::span<const double> times, double lambda,
                                          double gap_a, double gap_b) {
  if (pattern.size() != times.size()) {
    throw std::invalid_argument("DeltaSchedule: pattern \"" + std::string(pattern) + "\" needs " +
                                std::to_string(pattern.size()) + " times, got " + std::to_string(times.size()));
  }
  std::vector<DeltaEvent> events;
  int count[2] = {0, 0};
  for (std::size_t k = 0; k < pattern.size(); ++k) {
    const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(pattern[k])));
    if (c != 'A' && c != 'B') {
      throw std::invalid_argument("DeltaSchedule: bad pattern letter in \"" + std::string(pattern) + "\"");
    }
    if (k > 0 && times[k] < times[k - 1]) {
      throw std::invalid_argument("DeltaSchedule: times for pattern \"" + std::string(pattern) +
                                  "\" must be listed in time order");
    }
    const Detector d = c == 'A' ? Detector::A : Detector::B;
    events.push_back({d, times[k], ++count[c == 'A' ? 0 : 1]});
  }
  return DeltaSchedule(std::move(events), lambda, gap_a, gap_b);
}

std::string DeltaSchedule::pattern() const {
  std::string p;
  for (const auto& e : events_) p += to_string(e.detector);
  return p;
}

int DeltaSchedule::coupling_count(Detector d) const {
  return static_cast<int>(std::count_if(events_.begin(), events_.end(), [d](const DeltaEvent& e) {
    return e.detector == d;
  }));
}

double DeltaSchedule::event_time(Detector d, int slot) const {
  for (const auto& e : events_)
    if (e.detector == d && e.slot == slot) return e.time;
  throw std::out_of_range(std::string("DeltaSchedule: detector ") + to_string(d) + " has no slot " +
                          std::to_string(slot));
}

std::array<DeltaSchedule::Slot, 4> DeltaSchedule::slots() const {
  std::array<Slot, 4> out{};
  std::size_t n = 0;
  for (const auto& e : events_) {
    out[n++] = {e.detector, e.time};
    if (coupling_count(e.detector) == 1) out[n++] = {e.detector, e.time};
  }
  return out;
}

CouplingContext DeltaSchedule::context() const {
  CouplingContext ctx;
  const auto s = slots();
  for (std::size_t u = 0; u < 4; ++u) ctx.times[u] = s[u].time;
  ctx.lambda = lambda_;
  return ctx;
}

DeltaSchedule DeltaSchedule::with_gaps(double gap_a, double gap_b) const {
  return DeltaSchedule(events_, lambda_, gap_a, gap_b);
}

}  // namespace harvest::udw
