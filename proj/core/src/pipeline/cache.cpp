#include "fracspec/pipeline/cache.hpp"

#include <fcntl.h>
#include <openssl/evp.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fracspec/error.hpp"

namespace fracspec::pipeline {
namespace fs = std::filesystem;

std::string sha256_hex(const std::string& text) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  require(EVP_Digest(text.data(), text.size(), digest, &length, EVP_sha256(), nullptr) == 1, ErrorKind::kIo,
          "SHA-256 failed");
  std::string out;
  char buf[3];
  for (unsigned int i = 0; i < length; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    out += buf;
  }
  return out;
}

void write_atomic(const std::string& path, const std::string& text) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(out.good(), ErrorKind::kIo, "cannot write " + tmp);
    out << text;
    out.flush();
    require(out.good(), ErrorKind::kIo, "write to " + tmp + " failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    fail(ErrorKind::kIo, "cannot rename " + tmp + " to " + path + ": " + ec.message());
  }
}

namespace {

// Exclusive advisory lock held for the lifetime of the object.
class FileLock {
 public:
  explicit FileLock(const std::string& path) : fd_(::open(path.c_str(), O_RDWR | O_CREAT, 0644)) {
    require(fd_ >= 0, ErrorKind::kIo, "cannot open lock file " + path);
    if (::flock(fd_, LOCK_EX) != 0) {
      ::close(fd_);
      fail(ErrorKind::kIo, "cannot lock " + path);
    }
  }
  ~FileLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

 private:
  int fd_;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

double side_residual(const conformal::PrevertexSolution& sol, int nodes) {
  const std::vector<double> sides = conformal::side_lengths(sol, nodes);
  const std::size_t n = sol.size();
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double target = std::abs(sol.vertices[(k + 1) % n] - sol.vertices[k]);
    worst = std::max(worst, std::abs(sides[k] - target) / target);
  }
  return worst;
}

MapCache::MapCache(std::string directory) : directory_(std::move(directory)) {}

std::string MapCache::key(const std::string& family, int level, const geometry::Polygon& target, int symmetry,
                          const conformal::SolverOptions& options) const {
  std::ostringstream text;
  // Hex floats keep the key exact.
  char buf[64];
  text << "fracspec-map-v1|" << family << '|' << level << '|' << symmetry << '|' << options.nodes << '|';
  std::snprintf(buf, sizeof buf, "%a|%a|", options.tolerance, options.relaxation);
  text << buf;
  for (const Point& p : target.vertices()) {
    std::snprintf(buf, sizeof buf, "%a,%a;", p.real(), p.imag());
    text << buf;
  }
  return sha256_hex(text.str());
}

conformal::PrevertexSolution MapCache::get(const std::string& family, int level, const geometry::Polygon& target,
                                           int symmetry, const conformal::SolverOptions& options) const {
  auto solve = [&] {
    return conformal::solve_parameter_problem(target, conformal::symmetric_fixed_prevertices(target, symmetry),
                                              options);
  };
  if (directory_.empty()) return solve();
  fs::create_directories(directory_);
  const std::string base = (fs::path(directory_) / ("map-" + family + "-" + std::to_string(level) + "-" +
                                                    key(family, level, target, symmetry, options).substr(0, 16)))
                               .string();
  const FileLock lock(base + ".lock");
  if (fs::exists(base + ".json")) {
    try {
      conformal::PrevertexSolution sol = conformal::map_from_json(read_file(base + ".json"));
      const bool same_target = sol.vertices == target.vertices() && sol.symmetry == symmetry;
      if (same_target && side_residual(sol, options.nodes) <= 10.0 * options.tolerance) return sol;
    } catch (const Error&) {
      // Unreadable entries are solved again and overwritten.
    }
  }
  conformal::PrevertexSolution sol = solve();
  write_atomic(base + ".json", conformal::map_to_json(sol));
  return sol;
}

}  // namespace fracspec::pipeline
