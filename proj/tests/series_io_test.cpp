#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "fracadapt/series_io.hpp"

using namespace fracadapt;

TEST(SeriesIo, SkipsCommentsAndBlankLines) {
    std::istringstream in("# header\n1.5\n\n  -2\n# more\n3e-2\n");
    EXPECT_EQ(read_series(in), Eigen::Vector3d(1.5, -2, 0.03));
}

TEST(SeriesIo, RejectsGarbage) {
    std::istringstream in("1.0\nabc\n");
    EXPECT_THROW(read_series(in), IoError);
    EXPECT_THROW(read_series_file("/nonexistent/dir/series.txt"), IoError);
}

TEST(SeriesIo, RoundTripIsExact) {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> z;
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd x(1 + trial * 13);
        for (auto& v : x) v = z(rng) * std::pow(10.0, trial % 7 - 3);
        std::stringstream io;
        write_series(io, x, "trial " + std::to_string(trial));
        EXPECT_EQ(read_series(io), x);
    }
}

TEST(SeriesIo, FileRoundTrip) {
    const auto path = std::filesystem::temp_directory_path() / "fracadapt_series_io_test.txt";
    const Eigen::Vector4d x(0.1, 1.0 / 3.0, -7.25, 1e-300);
    write_series_file(path.string(), x);
    EXPECT_EQ(read_series_file(path.string()), x);
    std::filesystem::remove(path);
}
