#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ergmpool/network.hpp"

namespace ergmpool {

struct NetworkData {
  DirectedNetwork network;
  AttributeTable attributes;
  RatingEdgeList ratings;
};

// Reads the three batch files. Networks are returned sorted by network_id;
// nodes keep the order in which they appear in the attributes file. The
// ratings file is optional. Attribute files may carry precomputed `skills`
// and `perceived_skills` columns (the derived-attributes schema).
std::vector<NetworkData> load_batch(const std::filesystem::path& edges_file,
                                    const std::filesystem::path& attributes_file,
                                    const std::optional<std::filesystem::path>& ratings_file);

void write_edges_csv(std::ostream& out, const std::vector<NetworkData>& batch);
void write_ratings_csv(std::ostream& out, const std::vector<NetworkData>& batch);
// Writes the attributes schema; with `derived` the skills and
// perceived_skills columns are appended.
void write_attributes_csv(std::ostream& out, const std::vector<NetworkData>& batch, bool derived);

void write_batch(const std::vector<NetworkData>& batch, const std::filesystem::path& edges_file,
                 const std::filesystem::path& attributes_file,
                 const std::filesystem::path& ratings_file);

// Shortest round-trip decimal form used by every CSV writer.
std::string format_number(double v);

}  // namespace ergmpool
