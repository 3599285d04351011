#include "combopt/gtsp/tsplib.hpp"

#include <cctype>
#include <cmath>
#include <istream>
#include <sstream>

namespace combopt::gtsp {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

// Splits "KEY : value" / "KEY: value" / bare section names.
bool split_keyword(const std::string& line, std::string& key, std::string& value) {
    const std::size_t colon = line.find(':');
    if (colon == std::string::npos) {
        key = trim(line);
        value.clear();
    } else {
        key = trim(line.substr(0, colon));
        value = trim(line.substr(colon + 1));
    }
    for (auto& ch : key) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return !key.empty();
}

[[noreturn]] void fail(int line_no, const std::string& what) {
    std::ostringstream os;
    os << "tsplib parse error at line " << line_no << ": " << what;
    throw TsplibParseError(os.str());
}

}  // namespace

Weight euc2d_weight(std::pair<double, double> a, std::pair<double, double> b) {
    const double dx = a.first - b.first;
    const double dy = a.second - b.second;
    return static_cast<Weight>(std::sqrt(dx * dx + dy * dy) + 0.5);
}

TsplibData load_tsplib(std::istream& in) {
    TsplibData data;
    std::string edge_weight_type, edge_weight_format;
    int dimension = -1;
    int gtsp_sets = 0;
    int line_no = 0;

    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        std::string key, value;
        if (!split_keyword(t, key, value)) continue;

        if (key == "NAME") {
            data.name = value;
        } else if (key == "TYPE" || key == "COMMENT" || key == "EDGE_WEIGHT_SEC_TYPE" ||
                   key == "DISPLAY_DATA_TYPE" || key == "NODE_COORD_TYPE") {
            // metadata, ignored
        } else if (key == "DIMENSION") {
            dimension = std::stoi(value);
        } else if (key == "GTSP_SETS") {
            gtsp_sets = std::stoi(value);
        } else if (key == "EDGE_WEIGHT_TYPE") {
            edge_weight_type = value;
            if (value != "EUC_2D" && value != "EXPLICIT")
                throw TsplibParseError("unsupported edge-weight type: " + value);
        } else if (key == "EDGE_WEIGHT_FORMAT") {
            edge_weight_format = value;
            if (value != "FULL_MATRIX")
                throw TsplibParseError("unsupported edge-weight format: " + value);
        } else if (key == "NODE_COORD_SECTION") {
            if (dimension <= 0) fail(line_no, "NODE_COORD_SECTION before DIMENSION");
            data.points.resize(dimension);
            for (int i = 0; i < dimension; ++i) {
                int id;
                double x, y;
                if (!(in >> id >> x >> y)) fail(line_no, "truncated NODE_COORD_SECTION");
                if (id < 1 || id > dimension) fail(line_no, "node id out of range");
                data.points[id - 1] = {x, y};
            }
        } else if (key == "EDGE_WEIGHT_SECTION") {
            if (dimension <= 0) fail(line_no, "EDGE_WEIGHT_SECTION before DIMENSION");
            data.matrix.resize(static_cast<std::size_t>(dimension) * dimension);
            for (auto& w : data.matrix)
                if (!(in >> w)) fail(line_no, "truncated EDGE_WEIGHT_SECTION");
        } else if (key == "GTSP_SET_SECTION") {
            if (dimension <= 0) fail(line_no, "GTSP_SET_SECTION before DIMENSION");
            if (gtsp_sets <= 0) fail(line_no, "GTSP_SET_SECTION before GTSP_SETS");
            data.clusters.assign(gtsp_sets, {});
            for (int c = 0; c < gtsp_sets; ++c) {
                int id;
                if (!(in >> id)) fail(line_no, "truncated GTSP_SET_SECTION");
                int v;
                while (in >> v && v != -1) {
                    if (v < 1 || v > dimension) fail(line_no, "set vertex id out of range");
                    data.clusters[c].push_back(v - 1);
                }
            }
        } else if (key == "EOF") {
            break;
        } else {
            fail(line_no, "unknown keyword: " + key);
        }
    }

    if (dimension <= 0) fail(line_no, "missing DIMENSION");
    data.n = dimension;
    if (edge_weight_type == "EUC_2D" && data.points.empty())
        fail(line_no, "EUC_2D instance without NODE_COORD_SECTION");
    if (edge_weight_type == "EXPLICIT" && data.matrix.empty())
        fail(line_no, "EXPLICIT instance without EDGE_WEIGHT_SECTION");
    if (data.points.empty() && data.matrix.empty())
        fail(line_no, "no coordinates and no weight matrix");
    return data;
}

std::vector<Weight> tsplib_weight_matrix(const TsplibData& data) {
    if (!data.matrix.empty()) return data.matrix;
    const int n = data.n;
    std::vector<Weight> w(static_cast<std::size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j)
                w[static_cast<std::size_t>(i) * n + j] = euc2d_weight(data.points[i], data.points[j]);
    return w;
}

}  // namespace combopt::gtsp
