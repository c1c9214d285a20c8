#include "platoon/errors.hpp"

#include <sstream>

namespace platoon {

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
  std::ostringstream os;
  os << problems.size() << " configuration error(s)";
  for (const auto& p : problems) os << "\n  - " << p;
  return os.str();
}

std::string join_violations(const std::vector<InitialViolation>& violations) {
  std::ostringstream os;
  os << "initial state violates the collision/connectivity constraints ("
     << violations.size() << " violation(s))";
  for (const auto& v : violations) os << "\n  - " << v.describe();
  return os.str();
}

std::vector<std::string> describe_all(const std::vector<InitialViolation>& violations) {
  std::vector<std::string> out;
  out.reserve(violations.size());
  for (const auto& v : violations) out.push_back(v.describe());
  return out;
}

}  // namespace

const char* to_string(Channel c) noexcept {
  return c == Channel::distance ? "distance" : "bearing";
}

ConfigError::ConfigError(std::vector<std::string> problems)
    : PlatoonError(join_problems(problems)), problems_(std::move(problems)) {}

EnvelopeBreach::EnvelopeBreach(double xi, double m_lower, double m_upper)
    : PlatoonError("envelope breach"), xi_(xi), m_lower_(m_lower), m_upper_(m_upper) {}

EnvelopeBreach& EnvelopeBreach::at_time(double t) {
  time_ = t;
  message_.clear();
  return *this;
}

EnvelopeBreach& EnvelopeBreach::on_channel(Channel c) {
  channel_ = c;
  message_.clear();
  return *this;
}

EnvelopeBreach& EnvelopeBreach::for_vehicle(int index) {
  vehicle_ = index;
  message_.clear();
  return *this;
}

const char* EnvelopeBreach::what() const noexcept {
  if (!message_.empty()) return message_.c_str();
  try {
    std::ostringstream os;
    os.precision(17);
    os << "envelope breach";
    if (vehicle_) os << " on vehicle " << *vehicle_;
    if (channel_) os << " (" << to_string(*channel_) << " channel)";
    if (time_) os << " at t=" << *time_ << " s";
    os << ": normalized error " << xi_ << " not in (" << -m_lower_ << ", " << m_upper_ << ")";
    message_ = os.str();
  } catch (...) {
    return PlatoonError::what();
  }
  return message_.c_str();
}

std::string InitialViolation::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "vehicle " << vehicle << " " << to_string(channel) << " error " << value
     << " not strictly inside (" << lower << ", " << upper << ")";
  return os.str();
}

InitialFeasibilityError::InitialFeasibilityError(std::vector<InitialViolation> violations)
    : ConfigError(join_violations(violations), describe_all(violations)), violations_(std::move(violations)) {}

}  // namespace platoon
