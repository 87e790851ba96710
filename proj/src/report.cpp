#include "lsvlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace lsv {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_tail_csv(std::ostream& os, const TailEstimate& t) {
  os << "eps,count,trials,estimate,ci_low,ci_high\n";
  for (std::size_t i = 0; i < t.eps_grid.size(); ++i) {
    os << format_double(t.eps_grid[i]) << ',' << t.counts[i] << ',' << t.trials << ','
       << format_double(t.estimates[i]) << ',' << format_double(t.ci[i].low) << ','
       << format_double(t.ci[i].high) << '\n';
  }
}

void write_compare_csv(std::ostream& os, const CompareReport& r) {
  os << "eps,count,trials,estimate,ci_low,ci_high,gauss_count,gauss_estimate,gauss_ci_low,"
        "gauss_ci_high,ratio,overlap,singular_count\n";
  const TailEstimate& a = r.subject;
  const TailEstimate& g = r.gaussian;
  for (std::size_t i = 0; i < a.eps_grid.size(); ++i) {
    os << format_double(a.eps_grid[i]) << ',' << a.counts[i] << ',' << a.trials << ','
       << format_double(a.estimates[i]) << ',' << format_double(a.ci[i].low) << ','
       << format_double(a.ci[i].high) << ',' << g.counts[i] << ','
       << format_double(g.estimates[i]) << ',' << format_double(g.ci[i].low) << ','
       << format_double(g.ci[i].high) << ',' << format_double(r.ratio[i]) << ','
       << (r.overlap[i] ? 1 : 0) << ',' << a.singular_count << '\n';
  }
}

void write_verdict_csv(std::ostream& os, const std::vector<TestVerdict>& cells) {
  os << "label,param_a,param_b,count,trials,estimate,ci_low,ci_high,statistic,bound,outcome\n";
  for (const auto& c : cells) {
    os << c.label << ',' << format_double(c.param_a) << ',' << format_double(c.param_b) << ','
       << c.count << ',' << c.trials << ',' << format_double(c.estimate) << ','
       << format_double(c.ci_low) << ',' << format_double(c.ci_high) << ','
       << format_double(c.statistic) << ',' << format_double(c.bound_value) << ','
       << to_string(c.outcome) << '\n';
  }
}

void write_event_summary_csv(std::ostream& os, const std::vector<EventProfile>& profiles) {
  os << "event,count,trials,estimate,ci_low,ci_high\n";
  if (profiles.empty()) return;
  struct Row {
    const char* name;
    bool (*test)(const EventProfile&);
  };
  static const Row rows[] = {
      {"r1", [](const EventProfile& p) { return p.r1; }},
      {"r2", [](const EventProfile& p) { return p.r2; }},
      {"r3", [](const EventProfile& p) { return p.r3; }},
      {"r4", [](const EventProfile& p) { return p.r4; }},
      {"r", [](const EventProfile& p) { return p.r(); }},
      {"e_flat", [](const EventProfile& p) { return p.e_flat; }},
      {"e_lcd_approx", [](const EventProfile& p) { return p.e_lcd; }},
      {"e_star", [](const EventProfile& p) { return p.e_star; }},
      {"skipped", [](const EventProfile& p) { return p.skipped; }},
  };
  const auto trials = static_cast<std::uint64_t>(profiles.size());
  for (const auto& row : rows) {
    std::uint64_t count = 0;
    for (const auto& p : profiles) count += row.test(p) ? 1 : 0;
    const Proportion q = Proportion::of(count, trials);
    os << row.name << ',' << count << ',' << trials << ',' << format_double(q.estimate) << ','
       << format_double(q.ci.low) << ',' << format_double(q.ci.high) << '\n';
  }
}

void write_profile_rows_csv(std::ostream& os, const std::vector<EventProfile>& profiles) {
  os << "trial,skipped,r1,r2,r3,r4,r,e_flat,e_lcd_approx,e_star,sigma_n1_sqrt_n,r4_sum,"
        "kernel_inf_norm,lcd_found\n";
  for (std::size_t t = 0; t < profiles.size(); ++t) {
    const EventProfile& p = profiles[t];
    const auto& w = p.witnesses;
    const double scaled = w.sigma_from_bottom.front() * std::sqrt(static_cast<double>(w.n));
    os << t << ',' << p.skipped << ',' << p.r1 << ',' << p.r2 << ',' << p.r3 << ',' << p.r4 << ','
       << p.r() << ',' << p.e_flat << ',' << p.e_lcd << ',' << p.e_star << ','
       << format_double(scaled) << ',' << format_double(p.r4_partial_sum()) << ','
       << format_double(w.flat_norms.empty() ? std::nan("") : w.flat_norms.front()) << ','
       << (w.lcd ? (w.lcd->found() ? 1 : 0) : -1) << '\n';
  }
}

}  // namespace lsv
