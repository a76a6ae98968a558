#pragma once

#include <stdexcept>
#include <string>

namespace qtrace {

struct NearPole : std::domain_error {
  using std::domain_error::domain_error;
};

struct ResonantWeight : std::domain_error {
  using std::domain_error::domain_error;
};

struct TailTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoIntertwiner : std::domain_error {
  using std::domain_error::domain_error;
};

struct Divergent : std::domain_error {
  using std::domain_error::domain_error;
};

struct NotIsolated : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TruncationTooSmall : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace qtrace
