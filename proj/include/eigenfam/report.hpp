#pragma once

/**
 * @file report.hpp
 * @brief Residual statistics and pass/fail verdicts for pointwise checks.
 *
 * Every check sweeps sampled chart points and stages one residual per
 * identity per point. A point either commits all of its residuals, is
 * excluded by a field guard, or fails to evaluate. Reports become invalid
 * when more than 5% of points fail or more than 50% are excluded.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eigenfam/chart.hpp"
#include "eigenfam/errors.hpp"
#include "eigenfam/operators.hpp"
#include "eigenfam/tolerance.hpp"

namespace eigenfam {

struct SamplePoint {
  std::size_t chart = 0;
  std::string chart_name;
  ChartPoint coords;

  friend bool operator==(const SamplePoint&, const SamplePoint&) = default;
};

struct IdentityRecord {
  std::string identity;
  Tolerance tolerance;
  std::size_t evaluated = 0;
  double max_abs = 0.0;         // max |lhs − rhs|
  double mean_abs = 0.0;        // mean |lhs − rhs|
  double max_normalized = 0.0;  // max residual under the tolerance's mode
  std::optional<SamplePoint> argmax;
  bool passed = false;

  friend bool operator==(const IdentityRecord&, const IdentityRecord&) = default;
};

struct VerificationReport {
  std::string check;
  std::vector<IdentityRecord> identities;
  std::size_t points_sampled = 0;
  std::size_t points_excluded = 0;
  std::size_t points_failed = 0;
  std::vector<std::string> notes;
  bool valid = true;
  bool passed = false;

  const IdentityRecord* find(std::string_view name) const {
    for (const auto& r : identities)
      if (r.identity == name) return &r;
    return nullptr;
  }

  const IdentityRecord& at(std::string_view name) const {
    if (const auto* r = find(name)) return *r;
    throw InvalidArgument("report '" + check + "' has no identity '" + std::string(name) + "'");
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& r : identities) m = std::max(m, r.max_abs);
    return m;
  }

  double max_normalized() const {
    double m = 0.0;
    for (const auto& r : identities) m = std::max(m, r.max_normalized);
    return m;
  }

  // Overall verdict: validity and the conjunction of identity verdicts.
  void finalize() {
    passed = valid && std::all_of(identities.begin(), identities.end(),
                                  [](const IdentityRecord& r) { return r.passed; });
  }

  friend bool operator==(const VerificationReport&, const VerificationReport&) = default;
};

class ReportBuilder {
 public:
  ReportBuilder(std::string check, Tolerance tol) : check_{std::move(check)}, tol_{tol} {}

  // Declares an identity up front so it is reported even if never evaluated.
  void declare(const std::string& name) { slot(name); }

  void stage(const std::string& name, double residual, double rhs_magnitude) {
    staged_.push_back({slot(name), residual, rhs_magnitude});
  }

  void commit(const SamplePoint& p) {
    for (const auto& s : staged_) {
      auto& a = slots_[s.slot];
      const double residual = std::isnan(s.residual) ? INFINITY : s.residual;
      const double normalized = tol_.normalize(residual, s.rhs);
      a.record.evaluated += 1;
      a.sum += residual;
      a.record.max_abs = std::max(a.record.max_abs, residual);
      if (!a.record.argmax || normalized > a.record.max_normalized || std::isnan(normalized)) {
        a.record.max_normalized = std::isnan(normalized) ? INFINITY : normalized;
        a.record.argmax = p;
      }
    }
    staged_.clear();
  }

  void discard() { staged_.clear(); }
  void count_sampled() { ++sampled_; }
  void exclude() {
    discard();
    ++excluded_;
  }
  void fail(const std::string& message) {
    discard();
    ++failed_;
    if (failure_notes_ < 5) {
      notes_.push_back("evaluation failure: " + message);
      ++failure_notes_;
    }
  }
  void note(std::string n) { notes_.push_back(std::move(n)); }
  void invalidate(std::string why) {
    valid_ = false;
    notes_.push_back(std::move(why));
  }

  VerificationReport finish(double failure_limit = 0.05, double exclusion_limit = 0.5) {
    VerificationReport r;
    r.check = check_;
    r.points_sampled = sampled_;
    r.points_excluded = excluded_;
    r.points_failed = failed_;
    r.notes = notes_;
    r.valid = valid_;
    for (auto& a : slots_) {
      a.record.tolerance = tol_;
      a.record.mean_abs = a.record.evaluated ? a.sum / static_cast<double>(a.record.evaluated) : 0.0;
      a.record.passed = a.record.evaluated > 0 && tol_.accepts(a.record.max_normalized);
      r.identities.push_back(a.record);
    }
    const double n = static_cast<double>(std::max<std::size_t>(sampled_, 1));
    if (static_cast<double>(failed_) > failure_limit * n) {
      r.valid = false;
      r.notes.push_back("report invalid: " + std::to_string(failed_) + " of " + std::to_string(sampled_) +
                        " points failed to evaluate");
    }
    if (static_cast<double>(excluded_) > exclusion_limit * n) {
      r.valid = false;
      r.notes.push_back("report invalid: " + std::to_string(excluded_) + " of " + std::to_string(sampled_) +
                        " points excluded by guards");
    }
    r.finalize();
    return r;
  }

 private:
  struct Accumulator {
    IdentityRecord record;
    double sum = 0.0;
  };
  struct Staged {
    std::size_t slot;
    double residual, rhs;
  };

  std::size_t slot(const std::string& name) {
    for (std::size_t i = 0; i < slots_.size(); ++i)
      if (slots_[i].record.identity == name) return i;
    Accumulator a;
    a.record.identity = name;
    slots_.push_back(std::move(a));
    return slots_.size() - 1;
  }

  std::string check_;
  Tolerance tol_;
  std::vector<Accumulator> slots_;
  std::vector<Staged> staged_;
  std::vector<std::string> notes_;
  std::size_t sampled_ = 0, excluded_ = 0, failed_ = 0, failure_notes_ = 0;
  bool valid_ = true;
};

/**
 * Visits every sampled point of every chart. `fn(geo, point, builder)`
 * stages residuals; they are committed only if fn returns normally.
 */
template <class Fn>
void sweep(const ChartedManifold& m, const SamplingPlan& plan, ReportBuilder& builder, Fn&& fn) {
  for (std::size_t ci = 0; ci < m.charts.size(); ++ci) {
    const Chart& chart = m.charts[ci];
    for (const auto& p : sample_chart(chart, plan, ci)) {
      builder.count_sampled();
      SamplePoint sp{ci, chart.name, p};
      try {
        PointGeometry geo{chart, p};
        fn(geo, sp, builder);
        builder.commit(sp);
      } catch (const ExcludedPoint&) {
        builder.exclude();
      } catch (const Error& e) {
        builder.fail(chart.name + " " + format_point(p) + ": " + e.what());
      }
    }
  }
}

}  // namespace eigenfam
