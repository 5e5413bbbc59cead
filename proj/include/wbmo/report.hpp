#pragma once

// One row of a verification run: a computed left side, a bound, and the
// verdict under a pinned tolerance.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace wbmo {

enum class CheckStatus { Pass, Fail, Skipped };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skipped: return "skipped";
  }
  return "?";
}

struct VerificationReport {
  std::string check_id;
  std::string anchor;  // which statement of the theory the row exercises
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double tolerance = 0.0;
  CheckStatus status = CheckStatus::Skipped;
  std::string notes;

  [[nodiscard]] bool passed() const { return status != CheckStatus::Fail; }

  /// lhs <= rhs (1 + tol). 0 <= 0 passes with ratio 0.
  static VerificationReport inequality(std::string id, std::string anchor, double lhs, double rhs, double tol,
                                       std::string notes = {}) {
    VerificationReport r{std::move(id), std::move(anchor), lhs, rhs, ratio_of(lhs, rhs), tol, CheckStatus::Fail,
                         std::move(notes)};
    if (std::isnan(lhs) || std::isnan(rhs)) return r;
    r.status = lhs <= rhs * (1.0 + tol) || (lhs <= 0.0 && rhs >= 0.0) ? CheckStatus::Pass : CheckStatus::Fail;
    return r;
  }

  /// |lhs - rhs| <= tol max(1, |rhs|).
  static VerificationReport identity(std::string id, std::string anchor, double lhs, double rhs, double tol,
                                     std::string notes = {}) {
    VerificationReport r{std::move(id), std::move(anchor), lhs, rhs, ratio_of(lhs, rhs), tol, CheckStatus::Fail,
                         std::move(notes)};
    if (std::abs(lhs - rhs) <= tol * std::max(1.0, std::abs(rhs))) r.status = CheckStatus::Pass;
    return r;
  }

  static VerificationReport skipped(std::string id, std::string anchor, std::string notes, double lhs = 0.0,
                                    double rhs = 0.0) {
    return {std::move(id), std::move(anchor), lhs, rhs, ratio_of(lhs, rhs), 0.0, CheckStatus::Skipped,
            std::move(notes)};
  }

  /// Pass/fail driven by a boolean predicate the caller evaluated, with the
  /// values kept for the record.
  static VerificationReport predicate(std::string id, std::string anchor, bool ok, double lhs, double rhs,
                                      std::string notes = {}) {
    return {std::move(id), std::move(anchor), lhs, rhs, ratio_of(lhs, rhs), 0.0,
            ok ? CheckStatus::Pass : CheckStatus::Fail, std::move(notes)};
  }

  static double ratio_of(double lhs, double rhs) {
    if (rhs != 0.0) return lhs / rhs;
    return lhs == 0.0 ? 0.0 : std::copysign(INFINITY, lhs);
  }
};

using ReportList = std::vector<VerificationReport>;

inline bool all_passed(const ReportList& rows) {
  return std::all_of(rows.begin(), rows.end(), [](const VerificationReport& r) { return r.passed(); });
}

inline void append(ReportList& out, ReportList more) {
  out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
}

}  // namespace wbmo
