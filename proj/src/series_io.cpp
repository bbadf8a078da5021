#include "fracadapt/series_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

namespace fracadapt {

Eigen::VectorXd read_series(std::istream& in) {
    std::vector<double> values;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto last = line.find_last_not_of(" \t\r");
        const char* b = line.data() + first;
        const char* e = line.data() + last + 1;
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(b, e, v);
        if (ec != std::errc() || ptr != e)
            throw IoError("line " + std::to_string(lineno) + ": not a number: '" + std::string(b, e) + "'");
        values.push_back(v);
    }
    return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

Eigen::VectorXd read_series_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return read_series(in);
}

void write_series(std::ostream& out, const Eigen::Ref<const Eigen::VectorXd>& x, const std::string& header) {
    if (!header.empty()) out << "# " << header << '\n';
    char buf[40];
    for (Eigen::Index t = 0; t < x.size(); ++t) {
        std::snprintf(buf, sizeof buf, "%.17g", x(t));
        out << buf << '\n';
    }
}

void write_series_file(const std::string& path, const Eigen::Ref<const Eigen::VectorXd>& x,
                       const std::string& header) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_series(out, x, header);
    if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace fracadapt
