#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lsvlab/events.hpp"
#include "lsvlab/harness.hpp"

namespace lsv {

/// %.17g, with "inf", "-inf" and "nan" spelled out.
std::string format_double(double x);

/// eps,count,trials,estimate,ci_low,ci_high
void write_tail_csv(std::ostream& os, const TailEstimate& t);

/// Tail columns of the subject law, then the Gaussian counterpart, the ratio,
/// the overlap flag and the singular-atom count of the subject.
void write_compare_csv(std::ostream& os, const CompareReport& r);

/// label,param_a,param_b,count,trials,estimate,ci_low,ci_high,statistic,bound,outcome
void write_verdict_csv(std::ostream& os, const std::vector<TestVerdict>& cells);

/// event,count,trials,estimate,ci_low,ci_high over a set of profiles.
void write_event_summary_csv(std::ostream& os, const std::vector<EventProfile>& profiles);

/// One row per profile with every indicator and the main witnesses.
void write_profile_rows_csv(std::ostream& os, const std::vector<EventProfile>& profiles);

}  // namespace lsv
