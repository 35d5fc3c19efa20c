#include "cam/matrix_io.hpp"

#include <fstream>
#include <sstream>

#include "cam/errors.hpp"

namespace cam {

Eigen::MatrixXd read_matrix(std::istream& in, const std::string& label) {
    std::string header;
    if (!std::getline(in, header)) {
        throw io_error(label + ": empty input, expected '# rows cols' header");
    }
    std::istringstream hs(header);
    std::string hash;
    long rows = -1;
    long cols = -1;
    hs >> hash >> rows >> cols;
    if (hash != "#" || hs.fail() || rows < 0 || cols < 0) {
        throw io_error(label + ": malformed header '" + header + "', expected '# rows cols'");
    }
    Eigen::MatrixXd m(rows, cols);
    for (long i = 0; i < rows; ++i) {
        for (long j = 0; j < cols; ++j) {
            double v;
            if (!(in >> v)) {
                throw io_error(label + ": truncated at row " + std::to_string(i) +
                               ", col " + std::to_string(j));
            }
            m(i, j) = v;
        }
    }
    double extra;
    if (in >> extra) {
        throw io_error(label + ": trailing values beyond " + std::to_string(rows) + "x" +
                       std::to_string(cols));
    }
    return m;
}

Eigen::MatrixXd load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open '" + path + "' for reading");
    return read_matrix(in, path);
}

void write_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
    out << "# " << m.rows() << " " << m.cols() << "\n";
    char buf[40];
    for (long i = 0; i < m.rows(); ++i) {
        for (long j = 0; j < m.cols(); ++j) {
            // %.17g guarantees exact double round-trip.
            std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
            out << (j > 0 ? " " : "") << buf;
        }
        out << "\n";
    }
}

void save_matrix(const std::string& path, const Eigen::MatrixXd& m) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    write_matrix(out, m);
    out.flush();
    if (!out) throw io_error("failed writing '" + path + "'");
}

} // namespace cam
