#include "ergmpool/batch_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ergmpool/error.hpp"

namespace ergmpool {
namespace {

struct CsvTable {
  std::string file;
  std::vector<std::string> header;
  // (line number, cells)
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;

  std::optional<std::size_t> column(std::string_view name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  }
  std::size_t require(std::string_view name) const {
    auto c = column(name);
    if (!c) throw ParseError(file + ":1: missing column '" + std::string(name) + "'");
    return *c;
  }
};

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  cells.push_back(cur);
  return cells;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  CsvTable t;
  t.file = path.string();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto cells = split_line(line);
    if (t.header.empty()) {
      t.header = std::move(cells);
      continue;
    }
    if (cells.size() != t.header.size())
      throw ParseError(t.file + ":" + std::to_string(lineno) + ": expected " +
                       std::to_string(t.header.size()) + " fields, found " +
                       std::to_string(cells.size()));
    t.rows.emplace_back(lineno, std::move(cells));
  }
  if (t.header.empty()) throw ParseError(t.file + ": empty file");
  return t;
}

std::string where(const CsvTable& t, std::size_t line) {
  return t.file + ":" + std::to_string(line);
}

int parse_int(const CsvTable& t, std::size_t line, const std::string& cell) {
  int v = 0;
  auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || p != cell.data() + cell.size())
    throw ParseError(where(t, line) + ": expected integer, found '" + cell + "'");
  return v;
}

double parse_double(const CsvTable& t, std::size_t line, const std::string& cell) {
  try {
    std::size_t pos = 0;
    double v = std::stod(cell, &pos);
    if (pos != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw ParseError(where(t, line) + ": expected number, found '" + cell + "'");
  }
}

std::string item_column(std::size_t k) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "item_%02zu", k + 1);
  return buf;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::vector<NetworkData> load_batch(const std::filesystem::path& edges_file,
                                    const std::filesystem::path& attributes_file,
                                    const std::optional<std::filesystem::path>& ratings_file) {
  const CsvTable attrs = read_csv(attributes_file);
  const auto c_net = attrs.require("network_id");
  const auto c_node = attrs.require("node_id");
  const auto c_country = attrs.require("country");
  const auto c_wave = attrs.require("wave");
  const auto c_female = attrs.require("female");
  std::array<std::size_t, kSkillItemCount> c_items{};
  for (std::size_t k = 0; k < kSkillItemCount; ++k) c_items[k] = attrs.require(item_column(k));
  const auto c_skills = attrs.column("skills");
  const auto c_perceived = attrs.column("perceived_skills");

  struct Pending {
    std::string country, wave;
    std::vector<std::string> nodes;
    std::vector<NodeAttributes> rows;
  };
  std::map<std::string, Pending> pending;
  for (const auto& [line, cells] : attrs.rows) {
    auto& p = pending[cells[c_net]];
    if (p.nodes.empty()) {
      p.country = cells[c_country];
      p.wave = cells[c_wave];
    } else if (p.country != cells[c_country] || p.wave != cells[c_wave]) {
      throw ValidationError(where(attrs, line) + ": network '" + cells[c_net] +
                            "' has inconsistent country/wave");
    }
    if (cells[c_node].empty()) throw ParseError(where(attrs, line) + ": empty node_id");
    if (std::find(p.nodes.begin(), p.nodes.end(), cells[c_node]) != p.nodes.end())
      throw ValidationError(where(attrs, line) + ": duplicate node '" + cells[c_node] + "'");
    NodeAttributes row;
    if (!cells[c_female].empty()) {
      int f = parse_int(attrs, line, cells[c_female]);
      if (f != 0 && f != 1) throw ValidationError(where(attrs, line) + ": female must be 0, 1 or empty");
      row.female = f;
    }
    for (std::size_t k = 0; k < kSkillItemCount; ++k) {
      const auto& cell = cells[c_items[k]];
      if (cell.empty()) continue;
      int v = parse_int(attrs, line, cell);
      if (v < 0 || v > 5)
        throw ValidationError(where(attrs, line) + ": " + item_column(k) + " outside 0..5");
      row.skill_items[k] = v;
    }
    auto unit_value = [&](std::optional<std::size_t> col) -> std::optional<double> {
      if (!col || cells[*col].empty()) return std::nullopt;
      double v = parse_double(attrs, line, cells[*col]);
      if (v < 0.0 || v > 1.0)
        throw ValidationError(where(attrs, line) + ": " + attrs.header[*col] + " outside [0,1]");
      return v;
    };
    row.skills = unit_value(c_skills);
    row.perceived_skills = unit_value(c_perceived);
    p.nodes.push_back(cells[c_node]);
    p.rows.push_back(row);
  }

  std::map<std::string, NetworkData> batch;
  for (auto& [id, p] : pending) {
    NetworkData d{DirectedNetwork(id, p.nodes, p.country, p.wave), AttributeTable{std::move(p.rows)}, {}};
    batch.emplace(id, std::move(d));
  }

  auto resolve = [&](const CsvTable& t, std::size_t line, const std::string& net,
                     const std::string& node) -> std::pair<NetworkData*, std::size_t> {
    auto it = batch.find(net);
    if (it == batch.end())
      throw ValidationError(where(t, line) + ": unknown network '" + net + "'");
    auto idx = it->second.network.index_of(node);
    if (!idx)
      throw ValidationError(where(t, line) + ": unknown node '" + node + "' in network '" + net + "'");
    return {&it->second, *idx};
  };

  const CsvTable edges = read_csv(edges_file);
  {
    const auto e_net = edges.require("network_id");
    const auto e_src = edges.require("source");
    const auto e_tgt = edges.require("target");
    for (const auto& [line, cells] : edges.rows) {
      auto [d, i] = resolve(edges, line, cells[e_net], cells[e_src]);
      auto [d2, j] = resolve(edges, line, cells[e_net], cells[e_tgt]);
      if (i == j)
        throw ValidationError(where(edges, line) + ": self-loop on node '" + cells[e_src] + "'");
      if (d->network.has_tie(i, j))
        throw ValidationError(where(edges, line) + ": duplicate tie " + cells[e_src] + "->" +
                              cells[e_tgt]);
      d->network.add_tie(i, j);
    }
  }

  if (ratings_file) {
    const CsvTable ratings = read_csv(*ratings_file);
    const auto r_net = ratings.require("network_id");
    const auto r_rater = ratings.require("rater");
    const auto r_tgt = ratings.require("target");
    const auto r_score = ratings.require("score");
    std::map<std::string, std::set<std::pair<std::size_t, std::size_t>>> seen;
    for (const auto& [line, cells] : ratings.rows) {
      auto [d, i] = resolve(ratings, line, cells[r_net], cells[r_rater]);
      auto [d2, j] = resolve(ratings, line, cells[r_net], cells[r_tgt]);
      if (i == j) throw ValidationError(where(ratings, line) + ": self-rating");
      int score = parse_int(ratings, line, cells[r_score]);
      if (score < 1 || score > 5) throw ValidationError(where(ratings, line) + ": score outside 1..5");
      if (!seen[cells[r_net]].emplace(i, j).second)
        throw ValidationError(where(ratings, line) + ": duplicate rating");
      d->ratings.ratings.push_back({i, j, score});
    }
  }

  std::vector<NetworkData> out;
  out.reserve(batch.size());
  for (auto& [id, d] : batch) out.push_back(std::move(d));
  return out;
}

void write_edges_csv(std::ostream& out, const std::vector<NetworkData>& batch) {
  out << "network_id,source,target\n";
  for (const auto& d : batch) {
    const auto& ids = d.network.node_ids();
    for (auto [i, j] : d.network.ties()) out << d.network.id() << ',' << ids[i] << ',' << ids[j] << '\n';
  }
}

void write_ratings_csv(std::ostream& out, const std::vector<NetworkData>& batch) {
  out << "network_id,rater,target,score\n";
  for (const auto& d : batch) {
    const auto& ids = d.network.node_ids();
    for (const auto& r : d.ratings.ratings)
      out << d.network.id() << ',' << ids[r.rater] << ',' << ids[r.target] << ',' << r.score << '\n';
  }
}

void write_attributes_csv(std::ostream& out, const std::vector<NetworkData>& batch, bool derived) {
  out << "network_id,node_id,country,wave,female";
  for (std::size_t k = 0; k < kSkillItemCount; ++k) out << ',' << item_column(k);
  if (derived) out << ",skills,perceived_skills";
  out << '\n';
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  for (const auto& d : batch) {
    const auto& ids = d.network.node_ids();
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const auto& r = d.attributes.rows[i];
      out << d.network.id() << ',' << ids[i] << ',' << d.network.country() << ',' << d.network.wave()
          << ',' << (r.female ? std::to_string(*r.female) : "");
      for (const auto& item : r.skill_items) out << ',' << (item ? std::to_string(*item) : "");
      if (derived) out << ',' << opt(r.skills) << ',' << opt(r.perceived_skills);
      out << '\n';
    }
  }
}

void write_batch(const std::vector<NetworkData>& batch, const std::filesystem::path& edges_file,
                 const std::filesystem::path& attributes_file,
                 const std::filesystem::path& ratings_file) {
  std::ofstream e(edges_file), a(attributes_file), r(ratings_file);
  if (!e || !a || !r) throw ValidationError("cannot open batch output files for writing");
  write_edges_csv(e, batch);
  bool derived = false;
  for (const auto& d : batch)
    for (const auto& row : d.attributes.rows)
      derived = derived || row.skills || row.perceived_skills;
  write_attributes_csv(a, batch, derived);
  write_ratings_csv(r, batch);
}

}  // namespace ergmpool
