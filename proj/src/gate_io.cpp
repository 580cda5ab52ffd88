#include "weyl/gate_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "weyl/errors.hpp"

namespace weyl {

std::string format_complex(const Complex& z) {
    std::ostringstream os;
    os << std::setprecision(17) << z.real();
    if (z.imag() >= 0 || std::isnan(z.imag())) os << "+";
    os << std::setprecision(17) << z.imag() << "j";
    return os.str();
}

Complex parse_complex(const std::string& token) {
    if (token.empty()) throw ParseError("empty complex token");
    std::string t = token;
    bool has_j = false;
    if (t.back() == 'j' || t.back() == 'i') {
        has_j = true;
        t.pop_back();
    }
    if (!has_j) {
        size_t pos = 0;
        const double re = std::stod(t, &pos);
        if (pos != t.size()) throw ParseError("trailing characters in '" + token + "'");
        return {re, 0.0};
    }
    // split into real and imaginary part at the last +/- that is not an
    // exponent sign
    int split = -1;
    for (int i = static_cast<int>(t.size()) - 1; i > 0; --i) {
        const char c = t[i];
        if ((c == '+' || c == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    try {
        if (split < 0) {
            // pure imaginary like "1j" or "-0.5j"
            if (t.empty() || t == "+" ) return {0.0, 1.0};
            if (t == "-") return {0.0, -1.0};
            return {0.0, std::stod(t)};
        }
        const double re = std::stod(t.substr(0, split));
        std::string im_str = t.substr(split);
        if (im_str == "+") im_str = "1";
        if (im_str == "-") im_str = "-1";
        return {re, std::stod(im_str)};
    } catch (const std::exception&) {
        throw ParseError("bad complex token '" + token + "'");
    }
}

GateMatrix read_gate_matrix(std::istream& in) {
    std::vector<std::vector<Complex>> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        std::vector<Complex> row;
        std::string token;
        int col = 0;
        while (ls >> token) {
            ++col;
            try {
                row.push_back(parse_complex(token));
            } catch (const ParseError& e) {
                throw ParseError("line " + std::to_string(lineno) + ", column " +
                                 std::to_string(col) + ": " + e.what());
            }
        }
        if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("no matrix rows found");
    const size_t n = rows.size();
    for (const auto& r : rows)
        if (r.size() != n) throw ParseError("matrix is not square");
    GateMatrix u(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) u(i, j) = rows[i][j];
    return u;
}

GateMatrix read_gate_matrix_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open gate matrix file: " + path);
    try {
        return read_gate_matrix(f);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void write_gate_matrix(std::ostream& out, const GateMatrix& u) {
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        for (Eigen::Index j = 0; j < u.cols(); ++j) {
            if (j) out << " ";
            out << format_complex(u(i, j));
        }
        out << "\n";
    }
}

}  // namespace weyl
