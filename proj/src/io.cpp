#include "cutfem/io.hpp"

#include <cstdio>
#include <sstream>

namespace cutfem {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path), columns_(header.size()) {
  if (!out_) throw Error("cannot open for writing: " + path);
  if (header.empty()) throw Error("csv header must be nonempty");
  write_row(header);
}

void CsvWriter::write_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_)
    throw Error("csv row width mismatch in " + std::to_string(cells.size()) +
                " vs " + std::to_string(columns_));
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
  if (!out_) throw Error("csv write failed");
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config: " + path);
  std::map<std::string, std::string> config;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error("config line " + std::to_string(lineno) + " has no '=': " + line);
    const std::string key = trim(line.substr(0, eq));
    if (key.empty())
      throw Error("config line " + std::to_string(lineno) + " has empty key");
    config[key] = trim(line.substr(eq + 1));
  }
  return config;
}

void apply_override(std::map<std::string, std::string>& config,
                    const std::string& key_equals_value) {
  const auto eq = key_equals_value.find('=');
  if (eq == std::string::npos)
    throw Error("override must be key=value: " + key_equals_value);
  const std::string key = trim(key_equals_value.substr(0, eq));
  if (key.empty()) throw Error("override has empty key: " + key_equals_value);
  config[key] = trim(key_equals_value.substr(eq + 1));
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    std::size_t used = 0;
    out.push_back(std::stod(item, &used));
    if (used != item.size()) throw Error("bad number in list: " + item);
  }
  if (out.empty()) throw Error("empty number list: " + text);
  return out;
}

std::vector<std::uint64_t> parse_uint_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (double v : parse_double_list(text)) {
    if (v < 0 || v != static_cast<double>(static_cast<std::uint64_t>(v)))
      throw Error("expected nonnegative integer list: " + text);
    out.push_back(static_cast<std::uint64_t>(v));
  }
  return out;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  return out;
}

}  // namespace

void dump_mesh(const BackgroundMesh& mesh, const std::string& path) {
  auto out = open_out(path);
  out << "vertices " << mesh.num_vertices() << '\n';
  for (const auto& v : mesh.vertices)
    out << format_number(v.x) << ' ' << format_number(v.y) << '\n';
  out << "triangles " << mesh.num_triangles() << '\n';
  for (const auto& t : mesh.triangles)
    out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

void dump_element_classes(const CutTopology& topo, const std::string& path) {
  auto out = open_out(path);
  for (std::size_t t = 0; t < topo.classes.size(); ++t) {
    const char* name = topo.classes[t] == ElementClass::Inside    ? "inside"
                       : topo.classes[t] == ElementClass::Outside ? "outside"
                                                                  : "cut";
    out << t << ' ' << name << '\n';
  }
}

void dump_interface(const CutTopology& topo, const std::string& path) {
  auto out = open_out(path);
  for (const auto& cd : topo.cut_data)
    out << format_number(cd.seg_a.x) << ' ' << format_number(cd.seg_a.y) << ' '
        << format_number(cd.seg_b.x) << ' ' << format_number(cd.seg_b.y) << ' '
        << (cd.neumann ? 1 : 0) << '\n';
}

void dump_nodal_field(const P1Space& space, std::span<const double> coeffs,
                      const std::string& path) {
  if (static_cast<int>(coeffs.size()) != space.num_dofs())
    throw Error("dump_nodal_field: coefficient count mismatch");
  auto out = open_out(path);
  for (int i = 0; i < space.num_dofs(); ++i) {
    const Vec2 v = space.mesh->vertices[space.active_vertices[i]];
    out << format_number(v.x) << ' ' << format_number(v.y) << ' '
        << format_number(coeffs[i]) << '\n';
  }
}

void dump_matrix(const SparseMatrix& a, const std::string& path) {
  auto out = open_out(path);
  out << a.rows << ' ' << a.cols << ' ' << a.nnz() << '\n';
  for (int i = 0; i < a.rows; ++i)
    for (int k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k)
      out << i << ' ' << a.col_indices[k] << ' ' << format_number(a.values[k])
          << '\n';
}

}  // namespace cutfem
