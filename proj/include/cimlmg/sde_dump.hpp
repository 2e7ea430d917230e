#pragma once

// Binary trajectory dump. All integers and doubles are little-endian.
//
//   offset  size  field
//   0       8     magic "CIMSDE1\0"
//   8       4     u32 format version (1)
//   12      4     u32 model (0 full, 1 reduced_aux, 2 reduced_signal, 3 deterministic)
//   16      8     u64 seed
//   24      4     u32 n_trajectories
//   28      4     u32 n_pulses
//   32      4     u32 record_pulses
//   36      4     u32 n_times
//   40      4     u32 flags (bit 0: pump and coupling blocks present)
//   44      4     u32 reserved (0)
//   48            f64[n_times] times
//                 f64[n_trajectories * n_times] pulse-averaged |a_s|^2
//                 c128[n_trajectories * record_pulses * n_times] signal (re, im)
//                 c128[...] pump, c128[...] coupling        (if flag bit 0)

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "cimlmg/dopo_sde.hpp"
#include "cimlmg/errors.hpp"

namespace cimlmg::sde {

inline constexpr std::array<char, 8> kDumpMagic{'C', 'I', 'M', 'S', 'D', 'E', '1', '\0'};
inline constexpr std::uint32_t kDumpVersion = 1;

namespace detail {

class LeWriter {
 public:
  explicit LeWriter(std::ostream& os) : os_(os) {}
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void f64(double v) { put(std::bit_cast<std::uint64_t>(v), 8); }
  void c128(Complex z) {
    f64(z.real());
    f64(z.imag());
  }

 private:
  void put(std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) os_.put(static_cast<char>((v >> (8 * i)) & 0xffu));
  }
  std::ostream& os_;
};

class LeReader {
 public:
  explicit LeReader(std::istream& is) : is_(is) {}
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  double f64() { return std::bit_cast<double>(get(8)); }
  Complex c128() {
    const double re = f64();
    return {re, f64()};
  }

 private:
  std::uint64_t get(int bytes) {
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) {
      const int c = is_.get();
      if (c == std::char_traits<char>::eof()) throw IoError("sde dump: truncated file");
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
    }
    return v;
  }
  std::istream& is_;
};

}  // namespace detail

inline void write_dump(std::ostream& os, const SdeEnsemble& e) {
  os.write(kDumpMagic.data(), kDumpMagic.size());
  detail::LeWriter w(os);
  w.u32(kDumpVersion);
  w.u32(static_cast<std::uint32_t>(e.model));
  w.u64(e.seed);
  w.u32(static_cast<std::uint32_t>(e.n_trajectories));
  w.u32(static_cast<std::uint32_t>(e.n_pulses));
  w.u32(static_cast<std::uint32_t>(e.record_pulses));
  w.u32(static_cast<std::uint32_t>(e.times.size()));
  w.u32(e.has_auxiliary_fields() ? 1u : 0u);
  w.u32(0);
  for (double t : e.times) w.f64(t);
  for (double n : e.mean_photons) w.f64(n);
  for (Complex z : e.signal) w.c128(z);
  if (e.has_auxiliary_fields()) {
    for (Complex z : e.pump) w.c128(z);
    for (Complex z : e.coupling) w.c128(z);
  }
  if (!os) throw IoError("sde dump: write failed");
}

inline void write_dump(const std::string& path, const SdeEnsemble& e) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("sde dump: cannot open " + path + " for writing");
  write_dump(os, e);
}

inline SdeEnsemble read_dump(std::istream& is) {
  std::array<char, 8> magic{};
  is.read(magic.data(), magic.size());
  if (is.gcount() != 8 || magic != kDumpMagic) throw IoError("sde dump: bad magic");
  detail::LeReader r(is);
  const std::uint32_t version = r.u32();
  if (version != kDumpVersion) {
    throw IoError("sde dump: unsupported version " + std::to_string(version));
  }
  SdeEnsemble e;
  const std::uint32_t model = r.u32();
  if (model > 3) throw IoError("sde dump: unknown model tag");
  e.model = static_cast<Model>(model);
  e.seed = r.u64();
  e.n_trajectories = static_cast<int>(r.u32());
  e.n_pulses = static_cast<int>(r.u32());
  e.record_pulses = static_cast<int>(r.u32());
  const std::uint32_t n_times = r.u32();
  const std::uint32_t flags = r.u32();
  r.u32();
  e.times.resize(n_times);
  for (double& t : e.times) t = r.f64();
  e.mean_photons.resize(static_cast<std::size_t>(e.n_trajectories) * n_times);
  for (double& n : e.mean_photons) n = r.f64();
  const std::size_t n_amp = static_cast<std::size_t>(e.n_trajectories) * e.record_pulses * n_times;
  e.signal.resize(n_amp);
  for (Complex& z : e.signal) z = r.c128();
  if (flags & 1u) {
    e.pump.resize(n_amp);
    e.coupling.resize(n_amp);
    for (Complex& z : e.pump) z = r.c128();
    for (Complex& z : e.coupling) z = r.c128();
  }
  return e;
}

inline SdeEnsemble read_dump(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("sde dump: cannot open " + path);
  return read_dump(is);
}

}  // namespace cimlmg::sde
