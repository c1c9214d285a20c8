#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace platoon {

// Base for every error the library raises.
class PlatoonError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameters or configuration (nonpositive dt, bad bounds, unknown keys, ...).
class ConfigError : public PlatoonError {
 public:
  explicit ConfigError(const std::string& what) : PlatoonError(what) {}
  explicit ConfigError(std::vector<std::string> problems);
  ConfigError(const std::string& what, std::vector<std::string> problems)
      : PlatoonError(what), problems_(std::move(problems)) {}

  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

// Argument outside the mathematical domain of an operation (non-finite angle, t < 0, rho <= 0).
class DomainError : public PlatoonError {
 public:
  using PlatoonError::PlatoonError;
};

// Coincident vehicle positions: distance and bearing are undefined.
class DegenerateGeometry : public PlatoonError {
 public:
  using PlatoonError::PlatoonError;
};

enum class Channel { distance, bearing };

const char* to_string(Channel c) noexcept;

// A normalized error reached or left the open interval (-m_lower, m_upper).
// Time and vehicle are attached by the layer that knows them.
class EnvelopeBreach : public PlatoonError {
 public:
  EnvelopeBreach(double xi, double m_lower, double m_upper);

  double xi() const noexcept { return xi_; }
  double m_lower() const noexcept { return m_lower_; }
  double m_upper() const noexcept { return m_upper_; }
  std::optional<double> time() const noexcept { return time_; }
  std::optional<int> vehicle() const noexcept { return vehicle_; }
  std::optional<Channel> channel() const noexcept { return channel_; }

  EnvelopeBreach& at_time(double t);
  EnvelopeBreach& on_channel(Channel c);
  EnvelopeBreach& for_vehicle(int index);

  // Built on first use; the tagging setters only record fields.
  const char* what() const noexcept override;

 private:
  double xi_;
  double m_lower_;
  double m_upper_;
  std::optional<double> time_;
  std::optional<int> vehicle_;
  std::optional<Channel> channel_;
  mutable std::string message_;
};

// One offending (vehicle, channel) pair found by the initial feasibility check.
struct InitialViolation {
  int vehicle = 0;  // 1-based follower index
  Channel channel = Channel::distance;
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;

  std::string describe() const;
  bool operator==(const InitialViolation&) const = default;
};

// Initial platoon state is outside the constraint region.
class InitialFeasibilityError : public ConfigError {
 public:
  explicit InitialFeasibilityError(std::vector<InitialViolation> violations);

  const std::vector<InitialViolation>& violations() const noexcept { return violations_; }

 private:
  std::vector<InitialViolation> violations_;
};

}  // namespace platoon
