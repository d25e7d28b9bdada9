#include <gtest/gtest.h>

#include <omp.h>

#include <cmath>
#include <sstream>

#include "simiter/errors.hpp"
#include "simiter/harness.hpp"
#include "test_util.hpp"

using namespace simiter;
using namespace simiter::harness;

TEST(MakeSpectrum, Examples) {
  SpectrumSpec flat;
  flat.kind = SpectrumKind::flat;
  flat.length = 5;
  EXPECT_EQ(make_spectrum(flat), std::vector<double>(5, 1.0));

  SpectrumSpec geo;
  geo.kind = SpectrumKind::geometric;
  geo.head = 8;
  geo.ratio = 0.5;
  geo.length = 4;
  EXPECT_EQ(make_spectrum(geo), (std::vector<double>{8, 4, 2, 1}));

  SpectrumSpec zg;
  zg.kind = SpectrumKind::zero_gap;
  zg.position = 3;
  zg.head = 2;
  zg.knee = 1;
  zg.ratio = 0.1;
  zg.length = 6;
  const auto s = make_spectrum(zg);
  ASSERT_EQ(s.size(), 6u);
  EXPECT_EQ(s[0], 2.0);
  EXPECT_EQ(s[1], 2.0);
  EXPECT_EQ(s[2], 1.0);
  EXPECT_EQ(s[3], 1.0);
  EXPECT_DOUBLE_EQ(s[4], 0.1);
  EXPECT_DOUBLE_EQ(s[5], 0.01);
  EXPECT_EQ(s[2], s[3]); // bitwise tie at k

  SpectrumSpec step;
  step.kind = SpectrumKind::step;
  step.head = 3;
  step.ratio = 0;
  step.position = 2;
  step.length = 4;
  EXPECT_EQ(make_spectrum(step), (std::vector<double>{3, 3, 0, 0}));
}

TEST(MakeSpectrum, Errors) {
  SpectrumSpec c;
  c.kind = SpectrumKind::custom;
  c.values = {1, 2};
  EXPECT_THROW(make_spectrum(c), ContractError);
  c.values = {1, -1};
  EXPECT_THROW(make_spectrum(c), ContractError);
  c.values = {2, 1};
  EXPECT_EQ(make_spectrum(c), (std::vector<double>{2, 1}));

  SpectrumSpec zg;
  zg.kind = SpectrumKind::zero_gap;
  zg.position = 5;
  zg.length = 5;
  EXPECT_THROW(make_spectrum(zg), ContractError);
}

TEST(MakeSpectrum, RealizedSpectraAreNonIncreasing) {
  for (const char* tok : {"flat:head=3", "step:ratio=0.2,position=4", "geometric:ratio=0.7",
                          "zero-gap:head=5,knee=2,ratio=0.9,position=6"}) {
    SpectrumSpec spec = parse_spectrum(tok);
    spec.length = 30;
    const auto s = make_spectrum(spec);
    ASSERT_EQ(s.size(), 30u) << tok;
    for (std::size_t i = 0; i < s.size(); ++i) {
      EXPECT_GE(s[i], 0.0);
      if (i) EXPECT_LE(s[i], s[i - 1]) << tok;
    }
  }
}

TEST(ParseSpectrum, TokensAndDefaults) {
  SpectrumSpec base;
  base.head = 7;
  const auto s = parse_spectrum("zero-gap:knee=1.5,ratio=0.25,position=4", base);
  EXPECT_EQ(s.kind, SpectrumKind::zero_gap);
  EXPECT_EQ(s.head, 7.0);
  EXPECT_EQ(s.knee, 1.5);
  EXPECT_EQ(s.ratio, 0.25);
  EXPECT_EQ(s.position, 4u);
  EXPECT_EQ(parse_spectrum("custom:values=3/2/1").values, (std::vector<double>{3, 2, 1}));
  EXPECT_EQ(parse_spectrum("zero-gap-at-k").kind, SpectrumKind::zero_gap);
  EXPECT_THROW(parse_spectrum("bogus"), ContractError);
  EXPECT_THROW(parse_spectrum("flat:head"), ContractError);
  EXPECT_THROW(parse_spectrum("flat:color=red"), ContractError);
  EXPECT_THROW(parse_spectrum("flat:head=abc"), ContractError);
}

TEST(SynthesizeMatrix, RankOne) {
  RngStream r(1, 0);
  const Matrix a = synthesize_matrix({1.0}, 10, 8, r);
  EXPECT_NEAR(spectral_norm(a), 1.0, 1e-10);
}

TEST(SynthesizeMatrix, OracleRoundTrip) {
  RngStream r(2, 0);
  const std::vector<double> sigma{5, 3, 3, 1, 0.5, 0.25, 0.0};
  const Matrix a = synthesize_matrix(sigma, 12, 9, r);
  const auto got = jacobi_svd(a).sigma;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (sigma[i] == 0.0) {
      EXPECT_LE(got[i], 1e-12);
    } else {
      EXPECT_NEAR(got[i], sigma[i], 1e-9 * sigma[i]);
    }
  }
}

TEST(SynthesizeMatrix, ZerosGiveZeroMatrixAndOversizeIsRejected) {
  RngStream r(3, 0);
  EXPECT_EQ(synthesize_matrix(std::vector<double>(4, 0.0), 5, 4, r).frobenius_norm(), 0.0);
  EXPECT_THROW(synthesize_matrix(std::vector<double>(5, 1.0), 5, 4, r), ContractError);
  EXPECT_THROW(synthesize_matrix({1.0, 2.0}, 5, 4, r), ContractError);
}

namespace {

TrialConfig zero_gap_trial(std::uint64_t seed) {
  TrialConfig cfg;
  cfg.spectrum = parse_spectrum("zero-gap:head=2,knee=1,ratio=0.1");
  cfg.n = cfg.m = 40;
  cfg.params.k = 3;
  cfg.params.epsilon = 0.25;
  cfg.params.seed = seed;
  return cfg;
}

std::string csv_of(const std::vector<ExperimentRecord>& records) {
  std::ostringstream os;
  write_csv(os, records);
  return os.str();
}

} // namespace

TEST(RunTrial, ZeroGapSpectrumMeetsBound) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto rec = run_trial(zero_gap_trial(seed));
    EXPECT_TRUE(rec.ok()) << rec.status;
    EXPECT_TRUE(rec.bound_ok);
    EXPECT_EQ(rec.sigma_kplus1, 1.0);
    EXPECT_GE(*rec.ratio, 1.0 - 1e-6);
  }
}

TEST(RunTrial, RankKSpectrumIsExact) {
  TrialConfig cfg;
  cfg.spectrum = parse_spectrum("step:head=2,ratio=0");
  cfg.n = 50;
  cfg.m = 40;
  cfg.params.k = 4;
  const auto rec = run_trial(cfg);
  EXPECT_EQ(rec.sigma_kplus1, 0.0);
  EXPECT_LE(*rec.residual, 1e-8 * 2);
  EXPECT_EQ(rec.ratio, rec.residual);
  EXPECT_TRUE(rec.bound_ok);
}

TEST(RunTrial, DeterministicRows) {
  auto cfg = zero_gap_trial(5);
  cfg.params.with_trace = true;
  EXPECT_EQ(csv_of({run_trial(cfg)}), csv_of({run_trial(cfg)}));
}

TEST(RunTrial, TraceFieldsArePopulated) {
  auto cfg = zero_gap_trial(6);
  cfg.params.with_trace = true;
  tracer::TraceReport rep;
  const auto rec = run_trial(cfg, &rep);
  EXPECT_TRUE(rec.ok()) << rec.status;
  EXPECT_TRUE(rec.kprime);
  EXPECT_TRUE(rec.g2_norm && rec.g1_inv_norm && rec.min_t && rec.worst_margin && rec.tail &&
              rec.tail_limit);
  EXPECT_EQ(*rec.residual, rep.residual);
}

TEST(RunTrial, InnerFailuresLandInStatus) {
  TrialConfig cfg;
  cfg.spectrum = parse_spectrum("flat:head=0");
  cfg.n = cfg.m = 10;
  cfg.params.k = 2;
  const auto rec = run_trial(cfg);
  EXPECT_FALSE(rec.ok());
  EXPECT_FALSE(rec.bound_ok);
  EXPECT_EQ(rec.status.find(','), std::string::npos);
  EXPECT_NE(csv_of({rec}).find("error: "), std::string::npos);
}

TEST(RunTrial, ExplicitMatrixUsesOracleSpectrum) {
  const Matrix a = Matrix::diagonal(std::vector<double>{3, 2, 1, 0.5});
  TrialParams p;
  p.k = 2;
  p.epsilon = 0.5;
  const auto rec = run_trial_on(a, std::nullopt, "file", p);
  EXPECT_NEAR(rec.sigma_kplus1, 1.0, 1e-14);
  EXPECT_TRUE(rec.bound_ok);
  EXPECT_EQ(rec.spectrum, "file");
}

TEST(RunTrial, CsvHeaderAndEmptyOptionals) {
  const auto csv = csv_of({run_trial(zero_gap_trial(1))});
  const auto header_end = csv.find('\n');
  EXPECT_EQ(csv.substr(0, header_end), kCsvHeader);
  const auto row = csv.substr(header_end + 1);
  EXPECT_NE(row.find(",true,,,,,,,,ok\n"), std::string::npos) << row;
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), std::count(kCsvHeader.begin(), kCsvHeader.end(), ','));
}

TEST(Sweep, FlatCellNeverFails) {
  SweepGrid grid;
  grid.spectra = {parse_spectrum("flat")};
  grid.n = grid.m = 40;
  grid.k = 5;
  grid.seeds = 100;
  const auto res = sweep(grid);
  ASSERT_EQ(res.cells.size(), 1u);
  EXPECT_EQ(res.cells[0].trials, 100u);
  EXPECT_EQ(res.cells[0].failure_fraction, 0.0);
  EXPECT_FALSE(res.all_failed());
}

TEST(Sweep, SingleStepScheduleCanFail) {
  SweepGrid grid;
  grid.spectra = {parse_spectrum("geometric:ratio=0.99")};
  grid.n = grid.m = 80;
  grid.k = 10;
  grid.epsilons = {0.01};
  grid.t_multipliers = {0.0, 1.0};
  grid.seeds = 20;
  const auto res = sweep(grid);
  ASSERT_EQ(res.cells.size(), 2u);
  EXPECT_EQ(res.cells[0].t, 1);
  EXPECT_GT(res.cells[0].failures, 0u);
  EXPECT_LE(res.cells[1].failure_fraction, res.cells[0].failure_fraction);
}

TEST(Sweep, RecordOrderAndSummary) {
  SweepGrid grid;
  grid.spectra = {parse_spectrum("geometric:ratio=0.8"), parse_spectrum("flat")};
  grid.epsilons = {0.5, 0.25};
  grid.n = grid.m = 30;
  grid.k = 3;
  grid.seeds = 4;
  grid.seed_base = 10;
  grid.with_trace = true;
  const auto res = sweep(grid);
  ASSERT_EQ(res.records.size(), 16u);
  EXPECT_EQ(res.records[0].spectrum, "geometric");
  EXPECT_EQ(res.records[0].seed, 10u);
  EXPECT_EQ(res.records[3].seed, 13u);
  EXPECT_EQ(res.records[4].epsilon, 0.25);
  EXPECT_EQ(res.records[8].spectrum, "flat");
  ASSERT_EQ(res.cells.size(), 4u);
  for (const auto& c : res.cells) {
    EXPECT_EQ(c.trials, 4u);
    EXPECT_TRUE(c.median_ratio);
    EXPECT_TRUE(c.median_block_condition);
  }
  std::ostringstream os;
  write_summary(os, res.cells);
  EXPECT_EQ(os.str().substr(0, kSummaryHeader.size()), kSummaryHeader);
}

TEST(Sweep, ParallelAndSerialOutputsAreIdentical) {
  SweepGrid grid;
  grid.spectra = {parse_spectrum("zero-gap:head=2,knee=1,ratio=0.5"), parse_spectrum("step:ratio=0.3")};
  grid.n = grid.m = 30;
  grid.k = 4;
  grid.seeds = 12;
  grid.with_trace = true;
  grid.parallel = false;
  const auto serial = csv_of(sweep(grid).records);
  grid.parallel = true;
  const int saved = omp_get_max_threads();
  omp_set_num_threads(4);
  const auto parallel = csv_of(sweep(grid).records);
  omp_set_num_threads(saved);
  EXPECT_EQ(serial, parallel);
}

TEST(Sweep, EmptyGridIsRejected) {
  SweepGrid grid;
  EXPECT_THROW(sweep(grid), ContractError);
}

TEST(Median, OddEven) {
  EXPECT_EQ(median({3, 1, 2}), 2.0);
  EXPECT_EQ(median({4, 1, 2, 3}), 2.5);
  EXPECT_THROW(median({}), ContractError);
}
