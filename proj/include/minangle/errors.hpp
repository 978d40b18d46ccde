#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace minangle {

/// Malformed input: bad indices, dimension mismatches, violated preconditions.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A simplex (or one of its facets/subsimplices) is too flat for angles to be defined.
class DegeneracyError : public std::domain_error {
 public:
  explicit DegeneracyError(const std::string& what, std::vector<std::size_t> vertex_subset = {})
      : std::domain_error(what), vertex_subset_(std::move(vertex_subset)) {}

  /// Offending vertex indices, relative to the simplex the caller passed in. May be empty.
  const std::vector<std::size_t>& vertex_subset() const noexcept { return vertex_subset_; }

 private:
  std::vector<std::size_t> vertex_subset_;
};

/// A generator ran out of its rejection budget.
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace minangle
