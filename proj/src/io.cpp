#include "mixpose/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mixpose/errors.hpp"

namespace mixpose {

namespace {

constexpr double kRadToDeg = 57.295779513082320877;

std::ofstream open_out(const std::filesystem::path& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void write_meta(std::ofstream& out, const MetaList& meta) {
  for (const auto& [key, value] : meta) out << "# " << key << "=" << value << "\n";
}

void write_pgm_image(std::ofstream& out, const std::vector<double>& values,
                     int width, int height, double max_value) {
  out << "P5\n" << width << " " << height << "\n65535\n";
  const double scale = max_value > 0.0 ? 65535.0 / max_value : 0.0;
  std::vector<unsigned char> row(static_cast<std::size_t>(width) * 2);
  for (int iy = 0; iy < height; ++iy) {
    for (int ix = 0; ix < width; ++ix) {
      const double v = values[static_cast<std::size_t>(iy) * width + ix];
      const unsigned level = static_cast<unsigned>(std::lround(std::clamp(v * scale, 0.0, 65535.0)));
      row[2 * ix] = static_cast<unsigned char>(level >> 8);
      row[2 * ix + 1] = static_cast<unsigned char>(level & 0xFF);
    }
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
}

std::string pose_csv(const Pose6D& p) {
  std::ostringstream os;
  os << format_double(p.phi.x()) << "," << format_double(p.phi.y()) << ","
     << format_double(p.phi.z()) << "," << format_double(p.w.x()) << ","
     << format_double(p.w.y()) << "," << format_double(p.w.z());
  return os.str();
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_density_csv(const MeasurementDensity& d, const std::filesystem::path& path,
                       const MetaList& meta) {
  auto out = open_out(path);
  out << "# mixpose density\n";
  out << "# dim=" << d.grid.dim << "\n";
  out << "# origin=" << format_double(d.grid.origin[0]);
  if (d.grid.dim == 2) out << "," << format_double(d.grid.origin[1]);
  out << "\n# spacing=" << format_double(d.grid.spacing[0]);
  if (d.grid.dim == 2) out << "," << format_double(d.grid.spacing[1]);
  out << "\n# counts=" << d.grid.counts[0];
  if (d.grid.dim == 2) out << "," << d.grid.counts[1];
  out << "\n# normalization=" << format_double(d.normalization) << "\n";
  write_meta(out, meta);

  const int nx = d.grid.counts[0];
  const int ny = d.grid.dim == 2 ? d.grid.counts[1] : 1;
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      if (ix) out << ",";
      out << format_double(d.values[static_cast<std::size_t>(iy) * nx + ix]);
    }
    out << "\n";
  }
}

void write_density_pgm(const MeasurementDensity& d, const std::filesystem::path& path) {
  auto out = open_out(path, true);
  const int nx = d.grid.counts[0];
  const int ny = d.grid.dim == 2 ? d.grid.counts[1] : 1;
  write_pgm_image(out, d.values, nx, ny, d.max_value());
}

void write_map_csv(const ObjectiveMap& map, const std::filesystem::path& path,
                   const MetaList& meta) {
  auto out = open_out(path);
  out << "# mixpose objective map\n";
  out << "# n_phi=" << map.n_phi << "\n# n_w=" << map.n_w << "\n";
  out << "# phi_range=" << format_double(map.phi_min) << "," << format_double(map.phi_max) << "\n";
  out << "# w_range=" << format_double(map.w_min) << "," << format_double(map.w_max) << "\n";
  write_meta(out, meta);
  for (int iphi = 0; iphi < map.n_phi; ++iphi) {
    for (int iw = 0; iw < map.n_w; ++iw) {
      if (iw) out << ",";
      out << format_double(map.at(iphi, iw));
    }
    out << "\n";
  }
}

void write_map_pgm(const ObjectiveMap& map, const std::filesystem::path& path) {
  auto out = open_out(path, true);
  write_pgm_image(out, map.values, map.n_w, map.n_phi, map.max_value);
}

void write_map_argmax(const ObjectiveMap& map, const std::filesystem::path& path,
                      const MetaList& meta) {
  auto out = open_out(path);
  write_meta(out, meta);
  out << "argmax_phi=" << format_double(map.argmax_phi()) << "\n";
  out << "argmax_w=" << format_double(map.argmax_w()) << "\n";
  out << "argmax_cell=" << map.argmax_iphi << "," << map.argmax_iw << "\n";
  out << "max_value=" << format_double(map.max_value) << "\n";
}

void write_run_records_csv(const std::vector<RunRecord>& runs,
                           const std::filesystem::path& path, const MetaList& meta) {
  auto out = open_out(path);
  write_meta(out, meta);
  out << "run,seed,true_phi1,true_phi2,true_phi3,true_w1,true_w2,true_w3,"
         "start_phi1,start_phi2,start_phi3,start_w1,start_w2,start_w3,"
         "est_phi1,est_phi2,est_phi3,est_w1,est_w2,est_w3,"
         "objective,iterations,converged,failed\n";
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const RunRecord& r = runs[i];
    out << i << "," << r.seed << "," << pose_csv(r.true_pose) << ","
        << pose_csv(r.start_pose) << "," << pose_csv(r.estimate) << ","
        << format_double(r.objective_value) << "," << r.iterations << ","
        << (r.converged ? 1 : 0) << "," << (r.failed ? 1 : 0) << "\n";
  }
}

void write_study_table_csv(const std::vector<StudyTableRow>& rows,
                           const std::filesystem::path& path, const MetaList& meta) {
  auto out = open_out(path);
  write_meta(out, meta);
  out << "system,scenario,M,failures,"
         "rms_phi1_rad,rms_phi1_deg,rms_phi2_rad,rms_phi2_deg,rms_phi3_rad,rms_phi3_deg,"
         "rms_w1,rms_w2,rms_w3\n";
  for (const auto& row : rows) {
    out << static_cast<int>(row.system) << "," << to_string(row.scenario) << ","
        << row.M << "," << row.failures;
    for (int j = 0; j < 3; ++j)
      out << "," << format_double(row.rms[j]) << "," << format_double(row.rms[j] * kRadToDeg);
    for (int j = 3; j < 6; ++j) out << "," << format_double(row.rms[j]);
    out << "\n";
  }
}

SceneConfig load_scene_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scene config '" + path.string() + "'");

  SceneConfig scene;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream is(line);
    std::string kind;
    if (!(is >> kind)) continue;

    const auto fail = [&](const std::string& what) {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": " + what);
    };
    if (kind == "point") {
      double x, y, z;
      if (!(is >> x >> y >> z)) fail("point needs 3 coordinates");
      double sx, sy, sz;
      if (is >> sx) {
        if (!(is >> sy >> sz)) fail("point sigmas need 3 values");
        scene.object.components.push_back(gaussian_feature({x, y, z}, {sx, sy, sz}));
      } else {
        scene.object.components.push_back(delta_feature({x, y, z}));
      }
    } else if (kind == "camera") {
      double gamma;
      if (!(is >> gamma)) fail("camera needs an angle");
      scene.projectors.push_back(camera_projector(gamma));
    } else if (kind == "lateration") {
      double x, y, z;
      if (!(is >> x >> y >> z)) fail("lateration needs 3 coordinates");
      scene.projectors.push_back(lateration_projector({x, y, z}));
    } else {
      fail("unknown directive '" + kind + "'");
    }
  }
  if (scene.object.components.empty()) throw IoError("scene config defines no points");
  return scene;
}

}  // namespace mixpose
