#include "dnls/checkpoint.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "dnls/errors.hpp"

namespace dnls {

namespace {

constexpr char kMagic[8] = {'D', 'N', 'L', 'S', 'C', 'K', 'P', 'T'};
constexpr std::size_t kHeaderBytes = 8 + 4 + 4 + 8 + 8 + 8 + 8;

void put_u(std::vector<unsigned char>& out, std::uint64_t v, int bytes) {
  for (int k = 0; k < bytes; ++k) out.push_back(static_cast<unsigned char>(v >> (8 * k)));
}
void put_f(std::vector<unsigned char>& out, double x) { put_u(out, std::bit_cast<std::uint64_t>(x), 8); }

struct Reader {
  const std::vector<unsigned char>& buf;
  std::size_t pos = 0;
  std::uint64_t u(int bytes) {
    if (pos + bytes > buf.size()) {
      throw CheckpointError("corrupt checkpoint: truncated at byte " + std::to_string(buf.size()));
    }
    std::uint64_t v = 0;
    for (int k = 0; k < bytes; ++k) v |= std::uint64_t{buf[pos + k]} << (8 * k);
    pos += bytes;
    return v;
  }
  double f() { return std::bit_cast<double>(u(8)); }
};

std::string describe(std::size_t n, double l, double c) {
  char b[128];
  std::snprintf(b, sizeof b, "n_points=%zu, box_length=%.17g, center=%.17g", n, l, c);
  return b;
}

}  // namespace

void checkpoint_save(const Trajectory& traj, const std::filesystem::path& path) {
  if (!traj.grid) throw PreconditionError("trajectory has no grid");
  if (traj.times.size() != traj.snapshots.size()) {
    throw PreconditionError("trajectory times and snapshots differ in length");
  }
  const Grid& g = *traj.grid;
  std::vector<unsigned char> out(kMagic, kMagic + 8);
  put_u(out, kCheckpointVersion, 4);
  put_u(out, 0, 4);
  put_u(out, g.size(), 8);
  put_f(out, g.box_length());
  put_f(out, g.center());
  put_u(out, traj.snapshots.size(), 8);
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    const ComplexField& f = traj.snapshots[k];
    if (f.side() != Side::physical || f.size() != g.size()) {
      throw PreconditionError("snapshot " + std::to_string(k) + " is not a physical field on the grid");
    }
    put_f(out, traj.times[k]);
    for (const cplx& z : f.values()) {
      put_f(out, z.real());
      put_f(out, z.imag());
    }
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw CheckpointError("cannot open '" + path.string() + "' for writing");
  os.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!os) throw CheckpointError("write to '" + path.string() + "' failed");
}

Trajectory checkpoint_load(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw CheckpointError("cannot open checkpoint '" + path.string() + "'");
  const std::vector<unsigned char> buf((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  if (buf.size() < 8 || std::memcmp(buf.data(), kMagic, 8) != 0) {
    throw CheckpointError("corrupt checkpoint: bad magic in '" + path.string() + "'");
  }
  Reader r{buf, 8};
  const auto version = static_cast<std::uint32_t>(r.u(4));
  if (version != kCheckpointVersion) {
    throw CheckpointError("checkpoint version " + std::to_string(version) + " is not supported (expected " +
                          std::to_string(kCheckpointVersion) + ")");
  }
  r.u(4);
  const std::uint64_t n = r.u(8);
  const double length = r.f();
  const double center = r.f();
  const std::uint64_t count = r.u(8);
  if (n < 8 || n > (std::uint64_t{1} << 30) || (n & (n - 1)) != 0) {
    throw CheckpointError("corrupt checkpoint: n_points = " + std::to_string(n));
  }
  const std::uint64_t per = 8 + 16 * n;
  if (count > (buf.size() - kHeaderBytes) / per || kHeaderBytes + count * per != buf.size()) {
    throw CheckpointError("corrupt checkpoint: " + std::to_string(buf.size()) + " bytes for " +
                          std::to_string(count) + " snapshots of " + std::to_string(n) + " points");
  }
  Trajectory t;
  try {
    t.grid = make_grid(n, length, center);
  } catch (const ConfigError&) {
    throw CheckpointError("corrupt checkpoint: invalid grid " + describe(n, length, center));
  }
  for (std::uint64_t k = 0; k < count; ++k) {
    t.times.push_back(r.f());
    std::vector<cplx> v(n);
    for (auto& z : v) {
      const double re = r.f();
      z = cplx(re, r.f());
    }
    t.snapshots.emplace_back(t.grid, std::move(v));
    t.norms.push_back(norm_record(t.snapshots.back()));
  }
  return t;
}

Trajectory checkpoint_load(const std::filesystem::path& path, const Grid& expected) {
  Trajectory t = checkpoint_load(path);
  if (!t.grid->same_layout(expected)) {
    throw CheckpointError("checkpoint grid mismatch: file has " +
                          describe(t.grid->size(), t.grid->box_length(), t.grid->center()) +
                          ", expected " + describe(expected.size(), expected.box_length(), expected.center()));
  }
  return t;
}

}  // namespace dnls
