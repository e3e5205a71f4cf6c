#pragma once

#include <stdexcept>
#include <string>

namespace dbesim {

/// Invalid geometry, preset, or config file content. Raised before a run starts.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coordinate or address outside the plan it was checked against.
class RangeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Recon-buffer lookup for a pixel that is not resident.
class MissError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Explorer could not find any resident set that satisfies the schedule.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dbesim
