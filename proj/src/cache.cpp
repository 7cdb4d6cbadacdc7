#include "spinlb/cache.hpp"

#include <cstdio>
#include <fstream>
#include <optional>

namespace spinlb {

std::filesystem::path artifact_path(const std::filesystem::path& dir, int n) {
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(basis_hash(enumerate_basis(n, Sector::kA))));
  return dir / ("tensor_n" + std::to_string(n) + "_v" + kToolVersion + "_" + hash + ".json");
}

namespace {

std::optional<ClusterArtifacts> try_load(const std::filesystem::path& path, int n) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  try {
    const auto doc = nlohmann::json::parse(in);
    if (doc.at("tool_version").get<std::string>() != kToolVersion) return std::nullopt;
    auto tensor = StructureTensor::from_json(doc.at("tensor"));
    if (tensor.site_count() != n || tensor.basis() != enumerate_basis(n, Sector::kA)) return std::nullopt;
    auto constraints = ConstraintSet::from_json(doc.at("constraints"));
    constraints.orbit_of(tensor.size());
    return ClusterArtifacts{std::move(tensor), std::move(constraints), path, true};
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

ClusterArtifacts load_or_build(int n, const std::filesystem::path& dir, const RelationTable& rules) {
  const auto path = artifact_path(dir, n);
  if (&rules == &RelationTable::standard()) {
    if (auto cached = try_load(path, n)) return std::move(*cached);
  }

  auto tensor = build_structure_tensor(n, rules);
  auto constraints = ConstraintSet::build(Geometry::chain(n), tensor.basis());
  if (&rules == &RelationTable::standard()) {
    std::filesystem::create_directories(dir);
    const nlohmann::json doc{{"tool_version", kToolVersion},
                             {"tensor", tensor.to_json()},
                             {"constraints", constraints.to_json()}};
    // Write to a temporary name and rename so readers never see a partial file.
    auto tmp = path;
    tmp += ".tmp";
    {
      std::ofstream out(tmp);
      out << doc.dump();
      if (!out) throw std::runtime_error("cannot write cache file " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
  }
  return ClusterArtifacts{std::move(tensor), std::move(constraints), path, false};
}

}  // namespace spinlb
