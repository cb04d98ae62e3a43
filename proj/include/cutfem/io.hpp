#pragma once

#include <fstream>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cutfem/cut_topology.hpp"
#include "cutfem/p1_space.hpp"
#include "cutfem/sparse.hpp"

namespace cutfem {

// Shortest exact decimal form (%.17g); identical inputs give identical text,
// so reruns produce byte-identical files.
std::string format_number(double v);

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);

  void write_row(const std::vector<std::string>& cells);
  std::size_t columns() const { return columns_; }

 private:
  std::ofstream out_;
  std::size_t columns_ = 0;
};

// key = value lines; '#' starts a comment; keys may repeat (last one wins).
std::map<std::string, std::string> read_config(const std::string& path);
void apply_override(std::map<std::string, std::string>& config,
                    const std::string& key_equals_value);

std::vector<double> parse_double_list(const std::string& text);
std::vector<std::uint64_t> parse_uint_list(const std::string& text);

// Plain-text dumps for external plotting.
void dump_mesh(const BackgroundMesh& mesh, const std::string& path);
void dump_element_classes(const CutTopology& topo, const std::string& path);
// One interface segment per line: "ax ay bx by neumann".
void dump_interface(const CutTopology& topo, const std::string& path);
// One line per active vertex: "x y value".
void dump_nodal_field(const P1Space& space, std::span<const double> coeffs,
                      const std::string& path);
// Coordinate form: "rows cols nnz" header line, then "i j value".
void dump_matrix(const SparseMatrix& a, const std::string& path);

}  // namespace cutfem
