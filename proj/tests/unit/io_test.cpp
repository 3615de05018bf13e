#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "censolve/error.hpp"
#include "censolve/io.hpp"
#include "fixtures.hpp"

namespace censolve {
namespace {

namespace fs = std::filesystem;

class IoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("censolve_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

TEST(FormatRealTest, SeventeenSignificantDigits) {
  EXPECT_EQ(io::format_real(0.1), "0.10000000000000001");
  EXPECT_EQ(io::format_real(1.0), "1");
  EXPECT_EQ(io::format_real(-1.0 / 3.0e20), "-3.3333333333333333e-21");
}

TEST_F(IoTest, ColumnsRoundTrip) {
  const std::vector<double> x{0.0, 0.5, 1.0}, u{1.0 / 3.0, -2.0, 1e-300};
  io::write_columns(dir_ / "a.csv", {"x", "u"}, {x, u});
  const io::CsvTable t = io::read_csv(dir_ / "a.csv");
  ASSERT_EQ(t.header, (std::vector<std::string>{"x", "u"}));
  EXPECT_EQ(t.column("u"), u);
  EXPECT_EQ(t.column(std::size_t{0}), x);
  EXPECT_THROW(t.column("v"), IoError);
  EXPECT_THROW(io::write_columns(dir_ / "b.csv", {"x", "u"}, {x, {1.0}}), IoError);
}

TEST_F(IoTest, DenseTableRoundTripWithAndWithoutHeader) {
  const std::vector<std::vector<double>> rows{{0, 1.5}, {2.25, 0}};
  io::write_dense_table(dir_ / "t.csv", rows);
  EXPECT_EQ(io::read_dense_table(dir_ / "t.csv"), rows);
  {
    std::ofstream out(dir_ / "h.csv");
    out << "w0,w1\n0,1.5\n2.25,0\n";
  }
  EXPECT_EQ(io::read_dense_table(dir_ / "h.csv"), rows);
  {
    std::ofstream out(dir_ / "bad.csv");
    out << "0,1\n2\n";
  }
  EXPECT_THROW(io::read_dense_table(dir_ / "bad.csv"), IoError);
  EXPECT_THROW(io::read_dense_table(dir_ / "missing.csv"), IoError);
}

TEST_F(IoTest, OperatorDumpListsNonzeroWeights) {
  const Grid g(testing::kUnit, 8);
  const DiscreteOperator op = assemble_operator(KernelSpec::regional_stable(0.5, testing::kUnit), g);
  io::write_operator(dir_ / "op.csv", op, g);
  const io::CsvTable t = io::read_csv(dir_ / "op.csv");
  ASSERT_EQ(t.header, (std::vector<std::string>{"i", "j", "w"}));
  std::size_t nonzero = 0;
  for (std::size_t i = 0; i < op.size(); ++i) nonzero += op.entries(i).size();
  ASSERT_EQ(t.rows.size(), nonzero);
  for (const auto& row : t.rows) {
    EXPECT_EQ(op.weight(static_cast<std::size_t>(row[0]), static_cast<std::size_t>(row[1])), row[2]);
  }
}

TEST_F(IoTest, TrajectoryLongFormat) {
  const Grid g(testing::kUnit, 8);
  Trajectory traj;
  traj.times = {0.0, 0.5};
  traj.fields = {GridFunction(9, 1.0), GridFunction(9, 2.0)};
  io::write_trajectory(dir_ / "traj.csv", g, traj);
  const io::CsvTable t = io::read_csv(dir_ / "traj.csv");
  EXPECT_EQ(t.header, (std::vector<std::string>{"t", "i", "x", "u"}));
  EXPECT_EQ(t.rows.size(), 18u);
  EXPECT_EQ(t.rows.back(), (std::vector<double>{0.5, 8, 1.0, 2.0}));
}

TEST_F(IoTest, WritesAreByteStable) {
  const Grid g(testing::kUnit, 20);
  const GridFunction u = testing::sin_field(g, 1.0, 1.0);
  io::write_field(dir_ / "one.csv", g, u);
  io::write_field(dir_ / "two.csv", g, u);
  EXPECT_EQ(slurp(dir_ / "one.csv"), slurp(dir_ / "two.csv"));
}

}  // namespace
}  // namespace censolve
