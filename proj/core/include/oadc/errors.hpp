#pragma once

#include <stdexcept>
#include <string>

namespace oadc {

/// Query point lies strictly inside an obstacle where the distance field
/// and its derived quantities are undefined.
class InteriorPointError : public std::domain_error {
public:
  explicit InteriorPointError(const std::string& what) : std::domain_error(what) {}
};

class DomainError : public std::domain_error {
public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

class ZeroVectorError : public std::invalid_argument {
public:
  explicit ZeroVectorError(const std::string& what) : std::invalid_argument(what) {}
};

class DegenerateNormalError : public std::invalid_argument {
public:
  explicit DegenerateNormalError(const std::string& what) : std::invalid_argument(what) {}
};

class SingularBasisError : public std::invalid_argument {
public:
  explicit SingularBasisError(const std::string& what) : std::invalid_argument(what) {}
};

class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace oadc
