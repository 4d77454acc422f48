#pragma once

// Artifact persistence: the binary field-snapshot format shared by both
// solvers, and deterministic CSV row formatting for norm reports.
//
// Snapshot layout (all 64-bit little-endian):
//   bytes 0..7   magic "JXFIELD\0"
//   u64          version (currently 1)
//   u64          d, n, N
//   f64          L, t, eps   (eps = 0 marks a limit-system snapshot)
//   f64[n*N^d]   physical-space samples, component-slowest row-major

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "jinxin/grid.hpp"
#include "jinxin/littlewood_paley.hpp"

namespace jinxin {

static_assert(std::endian::native == std::endian::little,
              "snapshot io assumes a little-endian host");

inline constexpr char kSnapshotMagic[8] = {'J', 'X', 'F', 'I', 'E', 'L', 'D', '\0'};
inline constexpr std::uint64_t kSnapshotVersion = 1;

struct SnapshotMeta {
    int d = 0, n = 0, N = 0;
    double L = 0.0, t = 0.0, eps = 0.0;
};

inline void write_snapshot(const std::string& path, const RealField& u, double t, double eps) {
    const Grid& g = u.grid;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("write_snapshot: cannot open " + path);
    auto put_u64 = [&](std::uint64_t v) { out.write(reinterpret_cast<const char*>(&v), 8); };
    auto put_f64 = [&](double v) { out.write(reinterpret_cast<const char*>(&v), 8); };
    out.write(kSnapshotMagic, 8);
    put_u64(kSnapshotVersion);
    put_u64(std::uint64_t(g.d));
    put_u64(std::uint64_t(g.n));
    put_u64(std::uint64_t(g.N));
    put_f64(g.L);
    put_f64(t);
    put_f64(eps);
    out.write(reinterpret_cast<const char*>(u.a.data()),
              std::streamsize(u.a.size() * sizeof(double)));
    if (!out) throw std::runtime_error("write_snapshot: short write on " + path);
}

inline std::pair<RealField, SnapshotMeta> read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_snapshot: cannot open " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kSnapshotMagic, 8) != 0)
        throw std::runtime_error("read_snapshot: bad magic in " + path);
    auto get_u64 = [&] {
        std::uint64_t v = 0;
        in.read(reinterpret_cast<char*>(&v), 8);
        return v;
    };
    auto get_f64 = [&] {
        double v = 0;
        in.read(reinterpret_cast<char*>(&v), 8);
        return v;
    };
    const std::uint64_t version = get_u64();
    if (version != kSnapshotVersion)
        throw std::runtime_error("read_snapshot: unsupported version in " + path);
    SnapshotMeta meta;
    meta.d = int(get_u64());
    meta.n = int(get_u64());
    meta.N = int(get_u64());
    meta.L = get_f64();
    meta.t = get_f64();
    meta.eps = get_f64();
    if (!in) throw std::runtime_error("read_snapshot: truncated header in " + path);
    Grid g(meta.d, meta.n, meta.N, meta.L);  // re-validates the grid constraints
    RealField u(g);
    in.read(reinterpret_cast<char*>(u.a.data()), std::streamsize(u.a.size() * sizeof(double)));
    if (!in || std::size_t(in.gcount()) != u.a.size() * sizeof(double))
        throw std::runtime_error("read_snapshot: truncated payload in " + path);
    return {std::move(u), meta};
}

// shortest-exact decimal for doubles: %.17g round-trips, trimmed via retry
inline std::string format_double(double v) {
    char buf[64];
    if (v == std::rint(v) && std::abs(v) < 1e15) {  // exact small integers stay plain
        std::snprintf(buf, sizeof buf, "%.0f", v);
        return buf;
    }
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == v) return buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// one row of the norm-report schema (t, s, r, range, rho, value); rho is
// written as "inf" for sup-in-time rows
inline std::string norm_csv_row(double t, double s, double r, FreqRange range, double rho,
                                double value) {
    std::string row = format_double(t);
    row += ',';
    row += format_double(s);
    row += ',';
    row += format_double(r);
    row += ',';
    row += range == FreqRange::all ? "all" : (range == FreqRange::low ? "low" : "high");
    row += ',';
    row += std::isinf(rho) ? "inf" : format_double(rho);
    row += ',';
    row += format_double(value);
    row += '\n';
    return row;
}

inline constexpr const char* kNormCsvHeader = "t,s,r,range,rho,value\n";

// snapshot files are named {field}_NNNNNN.bin inside the run directory,
// with field "u" or "v0".."v2"
inline std::string snapshot_name(const std::string& prefix, int index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "_%06d.bin", index);
    return prefix + buf;
}

// sorted snapshot list for one field of a run directory
inline std::vector<std::string> list_snapshots(const std::string& dir,
                                               const std::string& prefix) {
    namespace fs = std::filesystem;
    std::vector<std::string> files;
    if (!fs::is_directory(dir)) throw std::runtime_error("list_snapshots: no directory " + dir);
    const std::string want = prefix + "_";
    for (const auto& e : fs::directory_iterator(dir)) {
        const std::string name = e.path().filename().string();
        if (name.rfind(want, 0) == 0 && name.size() == want.size() + 10 &&
            name.compare(name.size() - 4, 4, ".bin") == 0)
            files.push_back(e.path().string());
    }
    std::sort(files.begin(), files.end());
    return files;
}

}  // namespace jinxin
