#include <ostream>

#include "simiter/harness.hpp"
#include "simiter/matrix_io.hpp"

namespace simiter::harness {

namespace {

template <class T>
void opt(std::ostream& out, const std::optional<T>& v) {
  out << ',';
  if (!v) return;
  if constexpr (std::is_floating_point_v<T>) {
    out << format_double(*v);
  } else {
    out << *v;
  }
}

} // namespace

void write_csv_header(std::ostream& out) { out << kCsvHeader << '\n'; }

void write_csv_row(std::ostream& out, const ExperimentRecord& r) {
  out << r.n << ',' << r.m << ',' << r.k << ',' << format_double(r.epsilon) << ','
      << format_double(r.c) << ',' << r.t << ',' << r.seed << ',' << r.stream << ',' << r.spectrum
      << ',' << format_double(r.sigma_kplus1);
  opt(out, r.residual);
  opt(out, r.ratio);
  out << ',' << (r.bound_ok ? "true" : "false");
  opt(out, r.kprime);
  opt(out, r.g2_norm);
  opt(out, r.g1_inv_norm);
  opt(out, r.min_t);
  opt(out, r.worst_margin);
  opt(out, r.tail);
  opt(out, r.tail_limit);
  out << ',' << r.status << '\n';
}

void write_csv(std::ostream& out, const std::vector<ExperimentRecord>& records) {
  write_csv_header(out);
  for (const auto& r : records) write_csv_row(out, r);
}

void write_summary(std::ostream& out, const std::vector<SweepCell>& cells) {
  out << kSummaryHeader << '\n';
  for (const auto& c : cells) {
    out << c.spectrum << ',' << format_double(c.epsilon) << ',' << format_double(c.t_multiplier)
        << ',' << c.t << ',' << c.trials << ',' << c.failures << ','
        << format_double(c.failure_fraction);
    opt(out, c.median_ratio);
    opt(out, c.median_block_condition);
    out << '\n';
  }
}

} // namespace simiter::harness
