#pragma once

#include <iosfwd>
#include <string>

#include "weyl/types.hpp"

namespace weyl {

// Plain-text gate matrices: one row per line, whitespace-separated entries
// "re+imj" (e.g. "0.5-0.5j"). Lines starting with '#' are skipped.
GateMatrix read_gate_matrix(std::istream& in);
GateMatrix read_gate_matrix_file(const std::string& path);
void write_gate_matrix(std::ostream& out, const GateMatrix& u);

// Complex scalar in the same format.
std::string format_complex(const Complex& z);
Complex parse_complex(const std::string& token);

}  // namespace weyl
