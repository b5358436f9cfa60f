#include "nlsctl/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "nlsctl/errors.hpp"
#include "nlsctl/norms.hpp"

namespace nlsctl::io {
namespace {

static_assert(std::endian::native == std::endian::little,
              "binary trajectory dumps assume a little-endian host");

std::ofstream open_out(const std::filesystem::path& file, bool binary = false) {
  std::ofstream out(file, binary ? std::ios::binary : std::ios::out);
  if (!out) throw Error("cannot open " + file.string() + " for writing");
  out << std::setprecision(17);
  return out;
}

void write_provenance(std::ostream& out, const Provenance* provenance) {
  if (!provenance) return;
  out << "# config_hash=" << provenance->config_hash << ",base_seed=" << provenance->base_seed
      << '\n';
}

template <class T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw Error("truncated binary trajectory");
  return value;
}

}  // namespace

void write_trajectory_csv(const std::filesystem::path& file, const Trajectory& traj,
                          const Provenance* provenance) {
  auto out = open_out(file);
  write_provenance(out, provenance);
  out << "t,mass,lp2,lp4,lpinf\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto& f = traj.fields[i];
    const double l2 = lp_norm(f, 2.0);
    out << traj.time_at(i) << ',' << l2 * l2 << ',' << l2 << ',' << lp_norm(f, 4.0) << ','
        << lp_norm(f, kInfinity) << '\n';
  }
}

void write_control_csv(const std::filesystem::path& file, const ControlPath& u,
                       const Provenance* provenance) {
  auto out = open_out(file);
  write_provenance(out, provenance);
  out << 't';
  for (std::size_t j = 0; j < u.channels; ++j) out << ",u_" << j + 1;
  out << '\n';
  for (std::size_t k = 0; k < u.nodes(); ++k) {
    out << u.time.time(k);
    for (std::size_t j = 0; j < u.channels; ++j) out << ',' << u.at(k, j);
    out << '\n';
  }
}

ControlPath read_control_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error("cannot open " + file.string());
  std::string line;
  std::vector<std::vector<double>> rows;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2) throw ValidationError(file.string() + ": control CSV needs at least two rows");
  ControlPath u;
  u.channels = rows.front().size() - 1;
  u.time = TimeGrid{rows.back()[0], rows.size() - 1};
  u.time.validate();
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].size() != u.channels + 1) throw ValidationError(file.string() + ": ragged control CSV");
    if (std::abs(rows[k][0] - u.time.time(k)) > 1e-9 * std::max(1.0, u.time.final_time)) {
      throw ValidationError(file.string() + ": control times must be uniform and start at 0");
    }
    u.values.insert(u.values.end(), rows[k].begin() + 1, rows[k].end());
  }
  return u;
}

void write_path_csv(const std::filesystem::path& file, const WienerPath& path,
                    const Provenance* provenance) {
  auto out = open_out(file);
  write_provenance(out, provenance);
  out << 't';
  for (std::size_t j = 0; j < path.channels; ++j) out << ",beta_" << j + 1;
  out << '\n';
  for (std::size_t k = 0; k < path.time.nodes(); ++k) {
    out << path.time.time(k);
    for (std::size_t j = 0; j < path.channels; ++j) out << ',' << path.at(k, j);
    out << '\n';
  }
}

void write_trajectory_binary(const std::filesystem::path& file, const Trajectory& traj) {
  auto out = open_out(file, true);
  put<std::int32_t>(out, traj.grid.dimension());
  put<std::int32_t>(out, static_cast<std::int32_t>(traj.grid.points_per_axis()));
  put<double>(out, traj.grid.box_length());
  put<std::int64_t>(out, static_cast<std::int64_t>(traj.time.steps));
  put<std::int64_t>(out, static_cast<std::int64_t>(traj.stride));
  put<double>(out, traj.time.final_time);
  for (const auto& f : traj.fields) {
    out.write(reinterpret_cast<const char*>(f.values.data()),
              static_cast<std::streamsize>(f.values.size() * sizeof(Complex)));
  }
}

Trajectory read_trajectory_binary(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error("cannot open " + file.string());
  const auto d = get<std::int32_t>(in);
  const auto n = get<std::int32_t>(in);
  const auto length = get<double>(in);
  const auto steps = get<std::int64_t>(in);
  const auto stride = get<std::int64_t>(in);
  const auto final_time = get<double>(in);
  if (n <= 0 || steps <= 0 || stride <= 0) throw Error("corrupt binary trajectory header");

  Trajectory traj(SpatialGrid(d, static_cast<std::size_t>(n), length));
  traj.time = TimeGrid{final_time, static_cast<std::size_t>(steps)};
  traj.stride = static_cast<std::size_t>(stride);
  traj.node_index = Trajectory::stored_nodes(traj.time.steps, traj.stride);
  for (std::size_t i = 0; i < traj.node_index.size(); ++i) {
    ComplexField f(traj.grid);
    in.read(reinterpret_cast<char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(Complex)));
    if (!in) throw Error("truncated binary trajectory");
    traj.fields.push_back(std::move(f));
  }
  return traj;
}

}  // namespace nlsctl::io
