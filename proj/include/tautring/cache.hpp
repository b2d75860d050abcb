#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "tautring/relations.hpp"

namespace tautring {

struct CacheKey {
  int genus = 0;
  Mode mode = Mode::TTilde;
  Bidegree bidegree{};
  std::string field = "Q";
  int format_version = 0;
  std::string engine_version;

  // Hex SHA-256 of the canonical key text.
  std::string digest() const;
  std::string text() const;
};

CacheKey make_cache_key(int genus, Mode mode, Bidegree b, const std::string& field);

std::string sha256_hex(const std::string& data);

// JSON text of a relation basis; monomials and coefficients in canonical text.
std::string relation_basis_to_json(const AlgebraContext& ctx, const RelationBasis& rb);
RelationBasis relation_basis_from_json(const AlgebraContext& ctx, const std::string& text);

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Content addressed store of relation bases under a directory. Entries carry a
// checksum; damaged or mismatched entries are reported through the warning
// hook and treated as misses.
class RelationCache {
 public:
  explicit RelationCache(std::filesystem::path dir,
                         std::function<void(const std::string&)> warn = nullptr);

  std::optional<RelationBasis> get(const AlgebraContext& ctx, const CacheKey& key);
  void put(const AlgebraContext& ctx, const CacheKey& key, const RelationBasis& rb);
  std::filesystem::path path_for(const CacheKey& key) const;

  std::size_t hits() const { return hits_; }
  std::size_t misses() const { return misses_; }
  std::size_t corrupt() const { return corrupt_; }

 private:
  std::filesystem::path dir_;
  std::function<void(const std::string&)> warn_;
  std::size_t hits_ = 0, misses_ = 0, corrupt_ = 0;
};

}  // namespace tautring
