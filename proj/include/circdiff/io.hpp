#ifndef CIRCDIFF_IO_HPP
#define CIRCDIFF_IO_HPP

#include <string>
#include <vector>

#include <Eigen/Core>

namespace circdiff::io {

enum class AngleUnits { radians, degrees };

/// Angle observations with timestamps. Times are in days relative to the
/// first entry; timestamps keep the original strings for echoing in outputs.
struct AngleSeries {
    std::vector<std::string> timestamps;
    Eigen::ArrayXd times_days;
    Eigen::ArrayXd angles;  // radians, wrapped to (-pi, pi]
};

/// Paired daily price observations.
struct PriceSeries {
    std::vector<std::string> timestamps;
    Eigen::ArrayXd times_days;
    Eigen::ArrayXd price1, price2;
};

/// Parses a timestamp cell: plain number (days) or ISO-8601
/// YYYY-MM-DD[ T]HH:MM[:SS]. Returns false when neither form matches.
bool parse_timestamp(const std::string& cell, double& days_out);

/// CSV with header and rows (timestamp, angle). Angles must be finite,
/// timestamps strictly increasing; errors carry the file line number.
AngleSeries read_angle_csv(const std::string& path, AngleUnits units);

/// CSV with header and rows (timestamp, price1, price2); prices positive,
/// timestamps strictly increasing, no missing cells.
PriceSeries read_price_csv(const std::string& path);

/// Writes a numeric table; columns must have equal lengths. Values are
/// formatted with %.12g, so output is deterministic.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<Eigen::ArrayXd>& columns);

/// Same, with an arbitrary first column of strings (timestamps).
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::string>& first_column,
               const std::vector<Eigen::ArrayXd>& columns);

}  // namespace circdiff::io

#endif  // CIRCDIFF_IO_HPP
