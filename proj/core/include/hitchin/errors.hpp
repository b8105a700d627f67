#pragma once

#include <stdexcept>
#include <string>

namespace hitchin {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// complex or near-multiple spectrum where a loxodromic element was expected
struct NotLoxodromic : Error {
  using Error::Error;
};

struct ProductCollision : Error {
  using Error::Error;
};

struct NearDegenerate : Error {
  using Error::Error;
};

struct RankDeficient : Error {
  using Error::Error;
};

struct NoConvergence : Error {
  using Error::Error;
};

struct DomainError : Error {
  using Error::Error;
};

struct ContractViolation : Error {
  using Error::Error;
};

struct ResourceCap : Error {
  using Error::Error;
};

}  // namespace hitchin
