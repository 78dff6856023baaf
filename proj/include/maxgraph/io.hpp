#pragma once

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "verify.hpp"

namespace maxgraph {

inline constexpr const char* tool_version = "0.1.0";

/// Raised for malformed or invalid job configuration (exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Everything a run needs. Serialized as one JSON document with the
/// sections curve, surface, quadrature, mesh, output and testing.
struct JobConfig {
  std::vector<double> a{-1.0, 1.0};
  std::string tau = "all";
  double theta = 0.0;
  double A = 1.0;
  QuadratureOptions quad;
  MeshParams mesh;
  std::string out_dir = "out";
  std::string mesh_format = "obj";
  std::string report;  // empty: <out_dir>/report.json
  bool fault_branch = false;

  friend bool operator==(const JobConfig& x, const JobConfig& y) {
    return to_json(x) == to_json(y);
  }

  static nlohmann::json to_json(const JobConfig& c) {
    nlohmann::json j;
    j["curve"]["a"] = c.a;
    j["surface"] = {{"tau", c.tau}, {"theta", c.theta}, {"A", c.A}};
    j["quadrature"] = {{"tol", c.quad.tol}, {"max_intervals", c.quad.max_intervals}};
    j["mesh"] = {{"ring_count", c.mesh.ring_count}, {"ring_ratio", c.mesh.ring_ratio},
                 {"inner_ring", c.mesh.inner_ring}, {"ring_angles", c.mesh.ring_angles},
                 {"far_rings", c.mesh.far_rings},   {"far_angles", c.mesh.far_angles},
                 {"far_inner", c.mesh.far_inner},   {"far_radius", c.mesh.far_radius}};
    j["output"] = {{"dir", c.out_dir}, {"mesh_format", c.mesh_format}, {"report", c.report}};
    j["testing"] = {{"fault_branch", c.fault_branch}};
    return j;
  }
};

namespace detail {

template <class T>
void read_field(const nlohmann::json& sec, const char* section, const char* key, T& dst) {
  if (!sec.contains(key)) return;
  try {
    dst = sec.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("config: ") + section + "." + key + " has the wrong type");
  }
}

inline void reject_unknown(const nlohmann::json& sec, const char* section,
                           std::initializer_list<const char*> keys) {
  if (!sec.is_object()) throw ConfigError(std::string("config: section ") + section + " must be an object");
  for (const auto& [k, v] : sec.items()) {
    bool ok = false;
    for (const char* key : keys) ok = ok || k == key;
    if (!ok) throw ConfigError(std::string("config: unknown key ") + section + "." + k);
  }
}

}  // namespace detail

/// Overlays the keys present in `j` onto `c`. Unknown keys are errors.
inline void apply_json(JobConfig& c, const nlohmann::json& j) {
  using detail::read_field;
  using detail::reject_unknown;
  reject_unknown(j, "<root>", {"curve", "surface", "quadrature", "mesh", "output", "testing"});
  if (j.contains("curve")) {
    const auto& s = j["curve"];
    reject_unknown(s, "curve", {"a"});
    read_field(s, "curve", "a", c.a);
  }
  if (j.contains("surface")) {
    const auto& s = j["surface"];
    reject_unknown(s, "surface", {"tau", "theta", "A"});
    read_field(s, "surface", "tau", c.tau);
    read_field(s, "surface", "theta", c.theta);
    read_field(s, "surface", "A", c.A);
  }
  if (j.contains("quadrature")) {
    const auto& s = j["quadrature"];
    reject_unknown(s, "quadrature", {"tol", "max_intervals"});
    read_field(s, "quadrature", "tol", c.quad.tol);
    read_field(s, "quadrature", "max_intervals", c.quad.max_intervals);
  }
  if (j.contains("mesh")) {
    const auto& s = j["mesh"];
    reject_unknown(s, "mesh", {"ring_count", "ring_ratio", "inner_ring", "ring_angles", "far_rings",
                               "far_angles", "far_inner", "far_radius"});
    read_field(s, "mesh", "ring_count", c.mesh.ring_count);
    read_field(s, "mesh", "ring_ratio", c.mesh.ring_ratio);
    read_field(s, "mesh", "inner_ring", c.mesh.inner_ring);
    read_field(s, "mesh", "ring_angles", c.mesh.ring_angles);
    read_field(s, "mesh", "far_rings", c.mesh.far_rings);
    read_field(s, "mesh", "far_angles", c.mesh.far_angles);
    read_field(s, "mesh", "far_inner", c.mesh.far_inner);
    read_field(s, "mesh", "far_radius", c.mesh.far_radius);
  }
  if (j.contains("output")) {
    const auto& s = j["output"];
    reject_unknown(s, "output", {"dir", "mesh_format", "report"});
    read_field(s, "output", "dir", c.out_dir);
    read_field(s, "output", "mesh_format", c.mesh_format);
    read_field(s, "output", "report", c.report);
  }
  if (j.contains("testing")) {
    const auto& s = j["testing"];
    reject_unknown(s, "testing", {"fault_branch"});
    read_field(s, "testing", "fault_branch", c.fault_branch);
  }
}

inline JobConfig parse_config(const std::string& text, JobConfig base = {}) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: not valid JSON: ") + e.what());
  }
  apply_json(base, j);
  return base;
}

inline JobConfig load_config(const std::filesystem::path& path, JobConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

inline std::string serialize_config(const JobConfig& c) { return JobConfig::to_json(c).dump(2); }

/// Parses "-1,1" or "-1 1" into a list of reals.
inline std::vector<double> parse_real_list(const std::string& s) {
  std::vector<double> out;
  std::string tok;
  std::istringstream in(s);
  auto flush = [&]() {
    if (tok.empty()) return;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw ConfigError("not a real number: '" + tok + "'");
    out.push_back(v);
    tok.clear();
  };
  for (char ch; in.get(ch);) {
    if (ch == ',' || std::isspace(static_cast<unsigned char>(ch)) || ch == '[' || ch == ']')
      flush();
    else
      tok.push_back(ch);
  }
  flush();
  return out;
}

/// The curve the job describes, with the fault hook applied.
inline HyperellipticCurve job_curve(const JobConfig& c) {
  try {
    auto curve = make_curve(c.a);
    return c.fault_branch ? curve.with_branch_mode(BranchMode::naive_principal) : curve;
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

/// Validates everything make_curve does, plus positivity of tolerance and
/// resolutions and well-formed choice, format and homothety.
inline void validate(const JobConfig& c) {
  const auto curve = job_curve(c);
  if (!(c.quad.tol > 0.0) || !std::isfinite(c.quad.tol)) throw ConfigError("config: quadrature.tol must be positive");
  if (c.quad.max_intervals == 0) throw ConfigError("config: quadrature.max_intervals must be positive");
  try {
    c.mesh.validate();
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (c.A == 0.0 || !std::isfinite(c.A)) throw ConfigError("config: surface.A must be a nonzero real");
  if (!std::isfinite(c.theta)) throw ConfigError("config: surface.theta must be finite");
  if (c.tau != "all") {
    try {
      SpinChoice::parse(c.tau).check(curve);
    } catch (const ValidationError& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  }
  if (c.mesh_format != "obj" && c.mesh_format != "ply" && c.mesh_format != "csv")
    throw ConfigError("config: output.mesh_format must be obj, ply or csv");
}

// ---------------------------------------------------------------------------
// Mesh and metadata files. x3 is the Lorentzian height u; viewers read it as
// the Euclidean z axis.

inline void write_obj(std::ostream& os, const Mesh& m) {
  os << "# entire maximal graph; vertex order x1 x2 x3, x3 = height u (Lorentzian time axis)\n";
  os << std::setprecision(17);
  for (const auto& v : m.vertices) os << "v " << v.X.x1 << ' ' << v.X.x2 << ' ' << v.X.x3 << '\n';
  for (const auto& f : m.faces) os << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
}

namespace detail {
template <class T>
void put_le(std::ostream& os, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  os.write(reinterpret_cast<const char*>(b), sizeof(T));
}
}  // namespace detail

/// Binary little-endian PLY: double x, y, z per vertex, uchar/int face lists.
inline void write_ply(std::ostream& os, const Mesh& m) {
  os << "ply\nformat binary_little_endian 1.0\n"
     << "comment x3 (z) is the Lorentzian height u\n"
     << "element vertex " << m.vertices.size() << "\n"
     << "property double x\nproperty double y\nproperty double z\n"
     << "element face " << m.faces.size() << "\n"
     << "property list uchar int vertex_indices\nend_header\n";
  for (const auto& v : m.vertices) {
    detail::put_le(os, v.X.x1);
    detail::put_le(os, v.X.x2);
    detail::put_le(os, v.X.x3);
  }
  for (const auto& f : m.faces) {
    detail::put_le(os, static_cast<std::uint8_t>(3));
    for (auto i : f) detail::put_le(os, static_cast<std::int32_t>(i));
  }
}

/// Vertices with their provenance on the curve.
inline void write_csv(std::ostream& os, const Mesh& m) {
  os << "x1,x2,x3,re_z,im_z,bank\n" << std::setprecision(17);
  for (const auto& v : m.vertices) {
    os << v.X.x1 << ',' << v.X.x2 << ',' << v.X.x3 << ',' << v.z.real() << ',' << v.z.imag() << ',';
    if (v.bank) os << (*v.bank == Bank::north ? "north" : "south");
    os << '\n';
  }
}

struct Metadata {
  std::vector<double> a;
  std::string tau;
  double theta = 0.0, A = 1.0, tol = 0.0;
  Complex base_point;
  double growth = 0.0;
  std::vector<Vec3> singularities;
  std::string mesh_file;
  std::size_t vertex_count = 0, face_count = 0;
  std::string version = tool_version;
};

inline nlohmann::json to_json(const Metadata& m) {
  nlohmann::json j;
  j["tool"] = {{"name", "maxgraph"}, {"version", m.version}};
  j["curve"] = {{"a", m.a}};
  j["surface"] = {{"tau", m.tau}, {"theta", m.theta}, {"A", m.A}};
  j["quadrature"] = {{"tol", m.tol}};
  j["base_point"] = {m.base_point.real(), m.base_point.imag()};
  j["growth"] = m.growth;
  j["singularities"] = nlohmann::json::array();
  for (const auto& q : m.singularities) j["singularities"].push_back({q.x1, q.x2, q.x3});
  j["mesh"] = {{"file", m.mesh_file}, {"vertices", m.vertex_count}, {"faces", m.face_count},
               {"axes", "x1 x2 x3, x3 = Lorentzian height u"}};
  return j;
}

inline Metadata metadata_from_json(const nlohmann::json& j) {
  try {
    Metadata m;
    m.version = j.at("tool").at("version").get<std::string>();
    m.a = j.at("curve").at("a").get<std::vector<double>>();
    m.tau = j.at("surface").at("tau").get<std::string>();
    m.theta = j.at("surface").at("theta").get<double>();
    m.A = j.at("surface").at("A").get<double>();
    m.tol = j.at("quadrature").at("tol").get<double>();
    m.base_point = {j.at("base_point").at(0).get<double>(), j.at("base_point").at(1).get<double>()};
    m.growth = j.at("growth").get<double>();
    for (const auto& q : j.at("singularities"))
      m.singularities.push_back({q.at(0).get<double>(), q.at(1).get<double>(), q.at(2).get<double>()});
    m.mesh_file = j.at("mesh").at("file").get<std::string>();
    m.vertex_count = j.at("mesh").at("vertices").get<std::size_t>();
    m.face_count = j.at("mesh").at("faces").get<std::size_t>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("metadata: ") + e.what());
  }
}

inline Metadata read_metadata(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  try {
    return metadata_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("metadata: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Commands. Each returns the process exit code: 0 success, 1 check or
// numerical failure, 2 configuration error.

namespace detail {
inline int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

inline void write_file(const std::filesystem::path& p, const std::function<void(std::ostream&)>& f,
                       bool binary = false) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream os(p, binary ? std::ios::binary : std::ios::out);
  if (!os) throw Error("cannot write " + p.string());
  f(os);
  if (!os) throw Error("write failed: " + p.string());
}
}  // namespace detail

/// Admissible choices, their complement pairing and growth coefficients.
inline int cmd_enumerate(const JobConfig& c, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    validate(c);
    const auto curve = job_curve(c);
    std::vector<SpinChoice> list;
    if (c.tau == "all")
      list = enumerate_admissible(curve);
    else
      list = {SpinChoice::parse(c.tau), SpinChoice::parse(c.tau).complement()};
    const auto classes = congruence_classes(list);
    out << "admissible " << list.size() << ", classes " << classes.size() << '\n';
    out << std::left << std::setw(std::max<int>(5, static_cast<int>(curve.slit_count()) + 2)) << "tau"
        << std::setw(7) << "class" << std::setw(8) << "role" << "growth\n";
    for (const auto& t : list) {
      std::size_t k = 0;
      bool mirror = t[0];
      for (; k < classes.size(); ++k)
        if (classes[k].representative == t || classes[k].mirror == t) break;
      out << std::setw(std::max<int>(5, static_cast<int>(curve.slit_count()) + 2)) << t.str()
          << std::setw(7) << k << std::setw(8) << (mirror ? "mirror" : "rep")
          << build_data(curve, t, c.theta, c.A).growth() << '\n';
    }
    return 0;
  });
}

inline std::filesystem::path report_path(const JobConfig& c) {
  return c.report.empty() ? std::filesystem::path(c.out_dir) / "report.json"
                          : std::filesystem::path(c.report);
}

/// Mesh plus metadata for one choice.
inline int cmd_generate(const JobConfig& c, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    validate(c);
    if (c.tau == "all") throw ConfigError("config: generate needs a single surface.tau");
    const auto curve = job_curve(c);
    const auto data = build_data(curve, SpinChoice::parse(c.tau), c.theta, c.A);
    const auto g = build_graph(data, c.quad);
    const auto mesh = sample_mesh(g, c.mesh);
    const std::filesystem::path dir(c.out_dir);
    const std::string name = "mesh_" + c.tau + "." + c.mesh_format;
    detail::write_file(dir / name, [&](std::ostream& os) {
      if (c.mesh_format == "obj") write_obj(os, mesh);
      else if (c.mesh_format == "ply") write_ply(os, mesh);
      else write_csv(os, mesh);
    }, c.mesh_format == "ply");
    Metadata md;
    md.a = c.a;
    md.tau = c.tau;
    md.theta = c.theta;
    md.A = c.A;
    md.tol = c.quad.tol;
    md.base_point = g.base_point;
    md.growth = g.growth;
    md.singularities = g.singularities;
    md.mesh_file = name;
    md.vertex_count = mesh.vertices.size();
    md.face_count = mesh.faces.size();
    detail::write_file(dir / ("metadata_" + c.tau + ".json"),
                       [&](std::ostream& os) { os << to_json(md).dump(2) << '\n'; });
    out << "wrote " << (dir / name).string() << " (" << mesh.vertices.size() << " vertices, "
        << mesh.faces.size() << " faces)\n";
    return 0;
  });
}

inline VerifySettings verify_settings(const JobConfig& c) {
  VerifySettings s;
  s.quad = c.quad;
  s.mesh = c.mesh;
  return s;
}

/// Verification report for the family or one choice; 0 iff all checks pass.
inline int cmd_verify(const JobConfig& c, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    validate(c);
    const auto curve = job_curve(c);
    const auto s = verify_settings(c);
    const VerificationReport rep = c.tau == "all"
                                       ? verify_family(curve, s, c.theta, c.A)
                                       : verify_surface(curve, SpinChoice::parse(c.tau), s, c.theta, c.A);
    const auto path = report_path(c);
    detail::write_file(path, [&](std::ostream& os) { os << to_json(rep).dump(2) << '\n'; });
    auto print = [&](const VerificationReport& r) {
      for (const auto& k : r.checks) {
        std::ostringstream line;
        line << std::setprecision(10) << (k.informational ? "info " : k.passed ? "pass " : "FAIL ")
             << r.subject << ' ' << k.name << " measured=" << k.measured << ' ' << k.comparison << ' '
             << k.tolerance;
        out << line.str();
        if (!k.passed && !k.detail.empty()) out << " (" << k.detail << ')';
        out << '\n';
      }
    };
    for (const auto& m : rep.members) print(m);
    print(rep);
    out << (rep.all_passed() ? "all checks passed" : "some checks failed") << "; report: " << path.string()
        << '\n';
    return rep.all_passed() ? 0 : 1;
  });
}

}  // namespace maxgraph
