#pragma once

#include <filesystem>
#include <string>

#include "spinlb/structure_tensor.hpp"
#include "spinlb/symmetry.hpp"

namespace spinlb {

inline constexpr const char* kToolVersion = "1.0.0";

struct ClusterArtifacts {
  StructureTensor tensor;
  ConstraintSet constraints;
  std::filesystem::path path;
  bool loaded_from_cache = false;
};

/// File name keyed by site count, tool version and the basis-order hash.
std::filesystem::path artifact_path(const std::filesystem::path& dir, int n);

/// Structure tensor and chain constraints for n sites. Reads the cached file
/// when present and consistent with the current basis; otherwise builds and
/// writes it. Unreadable or stale files are rebuilt.
ClusterArtifacts load_or_build(int n, const std::filesystem::path& dir,
                               const RelationTable& rules = RelationTable::standard());

}  // namespace spinlb
