#pragma once

/// @file tsplib.hpp
/// @brief Reader for the TSPLIB subset used by the project (EUC_2D and
///        EXPLICIT/FULL_MATRIX), plus the GTSP_SET_SECTION extension used by
///        clustered instance files.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "combopt/common.hpp"

namespace combopt::gtsp {

struct TsplibData {
    std::string name;
    int n = 0;
    /// Node coordinates when EDGE_WEIGHT_TYPE is EUC_2D.
    std::vector<std::pair<double, double>> points;
    /// Full weight matrix when EDGE_WEIGHT_TYPE is EXPLICIT.
    std::vector<Weight> matrix;
    /// Cluster partition (0-based vertex ids) when a GTSP_SET_SECTION exists.
    std::vector<std::vector<int>> clusters;

    bool has_points() const { return !points.empty(); }
    bool has_clusters() const { return !clusters.empty(); }
};

class TsplibParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses a TSPLIB stream.  EUC_2D instances yield points; EXPLICIT ones a
/// full matrix.  Any other edge-weight type is rejected by name.
TsplibData load_tsplib(std::istream& in);

/// TSPLIB EUC_2D convention: Euclidean distance rounded to nearest integer.
Weight euc2d_weight(std::pair<double, double> a, std::pair<double, double> b);

/// Full weight matrix from TsplibData (computing EUC_2D distances if needed).
std::vector<Weight> tsplib_weight_matrix(const TsplibData& data);

}  // namespace combopt::gtsp
