#include "circdiff/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "circdiff/angle.hpp"
#include "circdiff/errors.hpp"

namespace circdiff::io {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // trim surrounding whitespace
        const auto b = field.find_first_not_of(" \t\r");
        const auto e = field.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

[[noreturn]] void fail(const std::string& path, std::size_t line_no, const std::string& what) {
    throw DataError(path + ", line " + std::to_string(line_no) + ": " + what);
}

bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

// days since 1970-01-01 for a civil date (proleptic Gregorian)
long days_from_civil(long y, unsigned m, unsigned d) {
    y -= m <= 2;
    const long era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<unsigned long>(y - era * 400);
    const unsigned long doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned long doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long>(doe) - 719468;
}

struct LineReader {
    std::ifstream in;
    std::string path;
    std::size_t line_no = 0;

    explicit LineReader(const std::string& p) : in(p), path(p) {
        if (!in) throw DataError(path + ": cannot open file");
    }
    bool next(std::string& line) {
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) return true;
        }
        return false;
    }
};

}  // namespace

bool parse_timestamp(const std::string& cell, double& days_out) {
    if (parse_number(cell, days_out)) return true;
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    const char* c = cell.c_str();
    int n = 0;
    if (std::sscanf(c, "%d-%d-%d%n", &y, &mo, &d, &n) == 3) {
        const char* rest = c + n;
        if (*rest == 'T' || *rest == ' ') {
            int n2 = 0;
            if (std::sscanf(rest + 1, "%d:%d:%d%n", &h, &mi, &s, &n2) == 3 &&
                rest + 1 + n2 == c + cell.size()) {
                // fallthrough
            } else if (std::sscanf(rest + 1, "%d:%d%n", &h, &mi, &n2) == 2 &&
                       rest + 1 + n2 == c + cell.size()) {
                s = 0;
            } else {
                return false;
            }
        } else if (*rest != '\0') {
            return false;
        }
        if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || s > 60) return false;
        days_out = static_cast<double>(days_from_civil(y, static_cast<unsigned>(mo),
                                                       static_cast<unsigned>(d))) +
                   (h * 3600.0 + mi * 60.0 + s) / 86400.0;
        return true;
    }
    return false;
}

AngleSeries read_angle_csv(const std::string& path, AngleUnits units) {
    LineReader reader(path);
    std::string line;
    if (!reader.next(line)) throw DataError(path + ": empty file");
    if (split_fields(line).size() < 2) fail(path, reader.line_no, "expected header with 2 columns");

    AngleSeries series;
    std::vector<double> times, angles;
    while (reader.next(line)) {
        const auto fields = split_fields(line);
        if (fields.size() != 2) {
            fail(path, reader.line_no,
                 "expected 2 columns, found " + std::to_string(fields.size()));
        }
        if (fields[0].empty() || fields[1].empty()) {
            fail(path, reader.line_no, "missing cell");
        }
        double t, a;
        if (!parse_timestamp(fields[0], t)) {
            fail(path, reader.line_no, "unparseable timestamp '" + fields[0] + "'");
        }
        if (!parse_number(fields[1], a) || !std::isfinite(a)) {
            fail(path, reader.line_no, "non-finite angle '" + fields[1] + "'");
        }
        if (!times.empty() && !(t > times.back())) {
            fail(path, reader.line_no, "timestamps must be strictly increasing");
        }
        if (units == AngleUnits::degrees) a *= M_PI / 180.0;
        series.timestamps.push_back(fields[0]);
        times.push_back(t);
        angles.push_back(wrap(a));
    }
    if (times.empty()) throw DataError(path + ": no data rows");
    series.times_days = Eigen::Map<Eigen::ArrayXd>(times.data(), times.size());
    series.times_days -= series.times_days[0];
    series.angles = Eigen::Map<Eigen::ArrayXd>(angles.data(), angles.size());
    return series;
}

PriceSeries read_price_csv(const std::string& path) {
    LineReader reader(path);
    std::string line;
    if (!reader.next(line)) throw DataError(path + ": empty file");
    if (split_fields(line).size() < 3) fail(path, reader.line_no, "expected header with 3 columns");

    PriceSeries series;
    std::vector<double> times, p1, p2;
    while (reader.next(line)) {
        const auto fields = split_fields(line);
        if (fields.size() != 3) {
            fail(path, reader.line_no,
                 "expected 3 columns, found " + std::to_string(fields.size()));
        }
        for (const auto& f : fields) {
            if (f.empty()) fail(path, reader.line_no, "missing cell");
        }
        double t, a, b;
        if (!parse_timestamp(fields[0], t)) {
            fail(path, reader.line_no, "unparseable timestamp '" + fields[0] + "'");
        }
        if (!parse_number(fields[1], a) || !(a > 0.0) || !std::isfinite(a) ||
            !parse_number(fields[2], b) || !(b > 0.0) || !std::isfinite(b)) {
            fail(path, reader.line_no, "prices must be positive numbers");
        }
        if (!times.empty() && !(t > times.back())) {
            fail(path, reader.line_no, "timestamps must be strictly increasing");
        }
        series.timestamps.push_back(fields[0]);
        times.push_back(t);
        p1.push_back(a);
        p2.push_back(b);
    }
    if (times.empty()) throw DataError(path + ": no data rows");
    series.times_days = Eigen::Map<Eigen::ArrayXd>(times.data(), times.size());
    series.times_days -= series.times_days[0];
    series.price1 = Eigen::Map<Eigen::ArrayXd>(p1.data(), p1.size());
    series.price2 = Eigen::Map<Eigen::ArrayXd>(p2.data(), p2.size());
    return series;
}

namespace {

void write_csv_impl(const std::string& path, const std::vector<std::string>& header,
                    const std::vector<std::string>* first_column,
                    const std::vector<Eigen::ArrayXd>& columns) {
    if (columns.empty()) throw std::invalid_argument("write_csv: no columns");
    const Eigen::Index rows = columns[0].size();
    for (const auto& c : columns) {
        if (c.size() != rows) throw std::invalid_argument("write_csv: ragged columns");
    }
    if (first_column && static_cast<Eigen::Index>(first_column->size()) != rows) {
        throw std::invalid_argument("write_csv: ragged columns");
    }
    std::ofstream out(path);
    if (!out) throw DataError(path + ": cannot open for writing");
    for (std::size_t i = 0; i < header.size(); ++i) {
        out << (i ? "," : "") << header[i];
    }
    out << "\n";
    char buf[64];
    for (Eigen::Index r = 0; r < rows; ++r) {
        bool first = true;
        if (first_column) {
            out << (*first_column)[static_cast<std::size_t>(r)];
            first = false;
        }
        for (const auto& c : columns) {
            std::snprintf(buf, sizeof buf, "%.12g", c[r]);
            out << (first ? "" : ",") << buf;
            first = false;
        }
        out << "\n";
    }
    if (!out.good()) throw DataError(path + ": write failed");
}

}  // namespace

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<Eigen::ArrayXd>& columns) {
    write_csv_impl(path, header, nullptr, columns);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::string>& first_column,
               const std::vector<Eigen::ArrayXd>& columns) {
    write_csv_impl(path, header, &first_column, columns);
}

}  // namespace circdiff::io
