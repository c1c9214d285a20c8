#pragma once

#include <cmath>
#include <cstring>
#include <filesystem>
#include <random>
#include <string>

#include "platoon/config.hpp"
#include "platoon/geometry.hpp"
#include "platoon/kinematics.hpp"

namespace platoon::test {

inline double deg(double d) { return d * kPi / 180.0; }

inline Constraints reference_constraints() { return {0.0375, 2.0, deg(45.0)}; }

inline bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("platoon_" + tag + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Equilibrium platoon: collinear at the desired gap, every error zero.
inline Config equilibrium_config(int followers, double duration) {
  Config c = reference_config(true);
  c.followers = followers;
  c.initial = std::vector<RelativePlacement>(static_cast<std::size_t>(followers), {c.desired_distance, 0.0, 0.0});
  c.leader = ConstantMotion{0.0, 0.0};
  c.duration = duration;
  return c;
}

}  // namespace platoon::test
