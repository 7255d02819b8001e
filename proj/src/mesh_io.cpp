#include "flowmesher/mesh_io.hpp"

#include "flowmesher/error.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <fstream>
#include <sstream>
#include <string>

namespace flowmesher {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

void check(std::ostream& out, const std::string& what) {
  out.flush();
  if (!out) throw IoError("write failed: " + what);
}

// Next line that is neither blank nor a comment.
bool next_record(std::istream& in, std::istringstream& line, std::size_t& line_no) {
  std::string s;
  while (std::getline(in, s)) {
    ++line_no;
    if (auto hash = s.find('#'); hash != std::string::npos) s.erase(hash);
    if (s.find_first_not_of(" \t\r") == std::string::npos) continue;
    line.clear();
    line.str(s);
    return true;
  }
  return false;
}

}  // namespace

void write_obj(std::ostream& out, const SimplexMesh& mesh, const PlaneFrame& frame) {
  for (const Vec3& p : mesh.nodes) {
    const Vec3 q = frame.to_input(p);
    fmt::print(out, "v {:.17g} {:.17g} {:.17g}\n", q.x(), q.y(), q.z());
  }
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto el = mesh.element(e);
    fmt::print(out, "f {} {} {}\n", el[0] + 1, el[1] + 1, el[2] + 1);
  }
}

void write_obj(const std::filesystem::path& path, const SimplexMesh& mesh, const PlaneFrame& frame) {
  auto out = open_out(path);
  write_obj(out, mesh, frame);
  check(out, path.string());
}

void write_node(std::ostream& out, const SimplexMesh& mesh) {
  fmt::print(out, "{} 3 0 1\n", mesh.nodes.size());
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
    const Vec3& p = mesh.nodes[i];
    const int flag = i < mesh.boundary.size() ? mesh.boundary[i] : 0;
    fmt::print(out, "{} {:.17g} {:.17g} {:.17g} {}\n", i + 1, p.x(), p.y(), p.z(), flag);
  }
}

void write_ele(std::ostream& out, const SimplexMesh& mesh) {
  fmt::print(out, "{} 4 0\n", mesh.num_elements());
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto el = mesh.element(e);
    fmt::print(out, "{} {} {} {} {}\n", e + 1, el[0] + 1, el[1] + 1, el[2] + 1, el[3] + 1);
  }
}

void write_node_ele(const std::filesystem::path& node_path, const std::filesystem::path& ele_path,
                    const SimplexMesh& mesh) {
  auto node = open_out(node_path);
  write_node(node, mesh);
  check(node, node_path.string());
  auto ele = open_out(ele_path);
  write_ele(ele, mesh);
  check(ele, ele_path.string());
}

SimplexMesh read_node_ele(std::istream& node, std::istream& ele) {
  SimplexMesh mesh;
  mesh.dimension = Dimension::Solid3D;
  std::istringstream line;
  std::size_t line_no = 0;

  if (!next_record(node, line, line_no)) throw ParseError("missing .node header", line_no);
  std::size_t n = 0;
  int dim = 0, nattr = 0, nmark = 0;
  if (!(line >> n >> dim >> nattr >> nmark) || dim != 3) throw ParseError("bad .node header", line_no);
  for (std::size_t i = 0; i < n; ++i) {
    if (!next_record(node, line, line_no)) throw ParseError("truncated .node file", line_no);
    std::size_t idx = 0;
    Vec3 p;
    if (!(line >> idx >> p.x() >> p.y() >> p.z()) || idx != i + 1) throw ParseError("bad node row", line_no);
    for (int a = 0; a < nattr; ++a) {
      double skip;
      line >> skip;
    }
    int flag = 0;
    if (nmark > 0 && !(line >> flag)) throw ParseError("missing boundary marker", line_no);
    mesh.nodes.push_back(p);
    mesh.boundary.push_back(flag != 0 ? 1 : 0);
  }
  mesh.fixed.assign(n, 0);

  line_no = 0;
  if (!next_record(ele, line, line_no)) throw ParseError("missing .ele header", line_no);
  std::size_t m = 0;
  int per = 0;
  if (!(line >> m >> per) || per != 4) throw ParseError("bad .ele header", line_no);
  for (std::size_t e = 0; e < m; ++e) {
    if (!next_record(ele, line, line_no)) throw ParseError("truncated .ele file", line_no);
    std::size_t idx = 0;
    std::array<long, 4> v{};
    if (!(line >> idx >> v[0] >> v[1] >> v[2] >> v[3]) || idx != e + 1) throw ParseError("bad element row", line_no);
    for (long k : v) {
      if (k < 1 || static_cast<std::size_t>(k) > n) throw ParseError("element index out of range", line_no);
      mesh.connectivity.push_back(static_cast<int>(k - 1));
    }
  }
  mesh.rebuild_edges();
  return mesh;
}

SimplexMesh read_node_ele(const std::filesystem::path& node_path, const std::filesystem::path& ele_path) {
  auto node = open_in(node_path);
  auto ele = open_in(ele_path);
  return read_node_ele(node, ele);
}

SimplexMesh read_obj_mesh(std::istream& in) {
  const ObjMesh obj = parse_obj(in);
  SimplexMesh mesh;
  mesh.dimension = Dimension::Planar2D;
  mesh.nodes = obj.vertices;
  mesh.sync_flags();
  for (const auto& t : obj.triangles) mesh.connectivity.insert(mesh.connectivity.end(), t.begin(), t.end());
  mesh.rebuild_edges();
  return mesh;
}

void write_report_csv(std::ostream& out, const QualityReport& report) {
  fmt::print(out, "bin_start,bin_end,count\n");
  for (int b = 0; b < QualityReport::kBins; ++b) {
    fmt::print(out, "{},{},{}\n", b * QualityReport::kBinWidth, (b + 1) * QualityReport::kBinWidth,
               report.histogram[b]);
  }
}

void write_metrics(std::ostream& out, const RunMetrics& m) {
  fmt::print(out, "N_nodes {}\n", m.nodes);
  fmt::print(out, "N_elements {}\n", m.elements);
  fmt::print(out, "e_avg {:.17g}\n", m.e_avg);
  fmt::print(out, "min_angle {:.17g}\n", m.min_angle);
  fmt::print(out, "max_angle {:.17g}\n", m.max_angle);
  fmt::print(out, "min_q {:.17g}\n", m.min_quality);
  fmt::print(out, "converged {}\n", m.converged ? 1 : 0);
  fmt::print(out, "wall_time_s {:.3f}\n", m.wall_time);
}

}  // namespace flowmesher
