#include "ergmpool/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>
#include <tuple>
#include <vector>

#include "ergmpool/batch_io.hpp"
#include "ergmpool/error.hpp"

namespace ergmpool {

using nlohmann::json;

namespace {

std::string attr_phrase(const std::string& attr) {
  if (attr == "skills") return "total skills";
  if (attr == "perceived_skills") return "perceived skills";
  if (attr == "female") return "being female";
  return attr;
}

std::string fmt3(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%#.3g", v);
  return buf;
}

std::string fmt2(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '&')
      out += "&amp;";
    else if (c == '<')
      out += "&lt;";
    else if (c == '>')
      out += "&gt;";
    else
      out += c;
  }
  return out;
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key))
    throw ValidationError("pooled JSON: " + where + " lacks '" + key + "'");
  return obj.at(key);
}

struct Cell {
  double mean, lower, upper;
};

struct Row {
  std::string network_type, model, term, label;
  Cell cell;
};

std::vector<Row> read_rows(const json& doc) {
  const auto& results = require(doc, "results", "document");
  if (!results.is_array()) throw ValidationError("pooled JSON: 'results' must be an array");
  std::vector<Row> rows;
  for (std::size_t r = 0; r < results.size(); ++r) {
    const std::string where = "results[" + std::to_string(r) + "]";
    const auto& entry = results[r];
    const auto& pooled = require(entry, "pooled", where);
    if (!pooled.is_array()) throw ValidationError("pooled JSON: " + where + ".pooled must be an array");
    for (std::size_t k = 0; k < pooled.size(); ++k) {
      const std::string tw = where + ".pooled[" + std::to_string(k) + "]";
      const auto& t = pooled[k];
      Row row;
      try {
        row.network_type = require(entry, "network_type", where).get<std::string>();
        row.model = require(entry, "model", where).get<std::string>();
        row.term = require(t, "term", tw).get<std::string>();
        row.label = t.contains("label") ? t.at("label").get<std::string>() : term_label(row.term);
        const auto& ci = require(t, "ci", tw);
        if (!ci.is_array() || ci.size() != 2)
          throw ValidationError("pooled JSON: " + tw + ".ci must hold two bounds");
        row.cell = {require(t, "mean", tw).get<double>(), ci[0].get<double>(), ci[1].get<double>()};
      } catch (const json::exception& e) {
        throw ValidationError("pooled JSON: " + tw + ": " + e.what());
      }
      if (!(row.cell.lower <= row.cell.upper))
        throw ValidationError("pooled JSON: " + tw + " (" + row.term +
                              ") has credible interval bounds out of order");
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace

std::string term_label(const std::string& term) {
  static const std::map<std::string, std::string> fixed{
      {"edges", "Density"},
      {"mutual", "Reciprocity"},
      {"nodematch.female", "Same-gender preference (homophily)"},
  };
  if (auto it = fixed.find(term); it != fixed.end()) return it->second;
  const auto dot = term.find('.');
  if (dot == std::string::npos) return term;
  const auto kind = term.substr(0, dot);
  const auto what = attr_phrase(term.substr(dot + 1));
  if (kind == "nodeocov") return "Sender effect of " + what;
  if (kind == "nodeicov") return "Receiver effect of " + what;
  if (kind == "absdiff") return "Similarity in " + what + " (homophily)";
  if (kind == "nodematch") return "Matching on " + what + " (homophily)";
  return term;
}

std::string group_label(const std::string& model, const std::string& term) {
  if (model == "h1") return "H1";
  if (model == "h2") return "H2";
  if (model != "rq1" && model != "rq2") return model;
  if (term == "edges" || term == "mutual") return "--";
  if (term == "absdiff.skills") return "RQ1c";
  if (term == "nodeocov.female") return "RQ2";
  if (term.ends_with(".perceived_skills")) return "RQ1b";
  if (term.ends_with(".skills")) return "RQ1a";
  return "--";
}

std::string format_estimate(double mean, double lower, double upper) {
  return fmt3(mean) + " [" + fmt3(lower) + ", " + fmt3(upper) + "]";
}

std::string render_report(const json& doc) {
  const auto rows = read_rows(doc);

  // Models in order of first appearance, with their term order.
  std::vector<std::pair<std::string, std::vector<std::string>>> models;
  std::map<std::tuple<std::string, std::string, std::string>, Cell> cells;
  for (const auto& r : rows) {
    auto it = std::find_if(models.begin(), models.end(), [&](auto& m) { return m.first == r.model; });
    if (it == models.end()) it = models.insert(models.end(), {r.model, {}});
    if (std::find(it->second.begin(), it->second.end(), r.term) == it->second.end())
      it->second.push_back(r.term);
    cells[{r.network_type, r.model, r.term}] = r.cell;
  }

  auto cell_text = [&](const std::string& type, const std::string& model, const std::string& term) {
    auto it = cells.find({type, model, term});
    return it == cells.end() ? std::string("NA")
                             : format_estimate(it->second.mean, it->second.lower, it->second.upper);
  };

  struct Block {
    std::string title;
    std::vector<std::string> models;
  };
  std::vector<Block> blocks{{"Research Questions", {}}, {"Hypotheses", {}}, {"Other Models", {}}};
  for (const auto& [name, terms] : models) {
    if (name == "rq1" || name == "rq2")
      blocks[0].models.push_back(name);
    else if (name == "h1" || name == "h2")
      blocks[1].models.push_back(name);
    else
      blocks[2].models.push_back(name);
  }

  // Lines of either a block title or four cells; widths fixed afterwards.
  std::vector<std::vector<std::string>> lines;
  lines.push_back({"Group", "Parameter", "Seeking", "Giving"});
  for (const auto& b : blocks) {
    if (b.models.empty()) continue;
    lines.push_back({});
    lines.push_back({b.title});
    for (std::size_t m = 0; m < b.models.size(); ++m) {
      if (m > 0) lines.push_back({});
      const auto& name = b.models[m];
      const auto& terms =
          std::find_if(models.begin(), models.end(), [&](auto& x) { return x.first == name; })->second;
      for (const auto& term : terms)
        lines.push_back({group_label(name, term), term_label(term), cell_text("seeking", name, term),
                         cell_text("giving", name, term)});
    }
  }

  std::vector<std::size_t> width(4, 0);
  for (const auto& l : lines)
    if (l.size() == 4)
      for (std::size_t c = 0; c < 4; ++c) width[c] = std::max(width[c], l[c].size());

  std::ostringstream out;
  out << "ERGM estimates for research questions and hypotheses: advice seeking and giving networks\n";
  out << "Pooled posterior means of the hierarchical models; 95% credible intervals in brackets.\n\n";
  for (const auto& l : lines) {
    std::string text;
    if (l.size() == 4) {
      for (std::size_t c = 0; c < 4; ++c) {
        text += l[c];
        if (c < 3) text += std::string(width[c] - l[c].size() + 2, ' ');
      }
    } else if (l.size() == 1) {
      text = l[0];
    }
    while (!text.empty() && text.back() == ' ') text.pop_back();
    out << text << '\n';
  }
  return out.str();
}

ForestPlot render_forest(const json& doc) {
  const auto rows = read_rows(doc);
  ForestPlot plot;
  std::ostringstream csv;
  csv << "network_type,model,term,label,mean,lower,upper\n";
  for (const auto& r : rows)
    csv << r.network_type << ',' << r.model << ',' << r.term << ',' << r.label << ','
        << format_number(r.cell.mean) << ',' << format_number(r.cell.lower) << ','
        << format_number(r.cell.upper) << '\n';
  plot.csv = csv.str();

  const double label_w = 420, plot_w = 360, row_h = 22, top = 30, margin = 20;
  const double height = top + row_h * static_cast<double>(rows.size()) + 40;
  const double width = label_w + plot_w + 2 * margin;
  double lo = 0.0, hi = 0.0;
  for (const auto& r : rows) {
    lo = std::min(lo, r.cell.lower);
    hi = std::max(hi, r.cell.upper);
  }
  if (hi - lo < 1e-12) hi = lo + 1.0;
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
  auto x_of = [&](double v) { return margin + label_w + (v - lo) / (hi - lo) * plot_w; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt2(width) << "\" height=\""
      << fmt2(height) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << fmt2(margin) << "\" y=\"18\">Pooled estimates, 95% credible intervals</text>\n";
  const double bottom = top + row_h * static_cast<double>(rows.size());
  svg << "<line x1=\"" << fmt2(x_of(0)) << "\" y1=\"" << fmt2(top) << "\" x2=\"" << fmt2(x_of(0))
      << "\" y2=\"" << fmt2(bottom) << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const double y = top + row_h * (static_cast<double>(i) + 0.5);
    svg << "<text x=\"" << fmt2(margin) << "\" y=\"" << fmt2(y + 4) << "\">"
        << xml_escape(r.network_type + " " + r.model + ": " + r.label) << "</text>\n";
    svg << "<line x1=\"" << fmt2(x_of(r.cell.lower)) << "\" y1=\"" << fmt2(y) << "\" x2=\""
        << fmt2(x_of(r.cell.upper)) << "\" y2=\"" << fmt2(y) << "\" stroke=\"black\"/>\n";
    svg << "<circle cx=\"" << fmt2(x_of(r.cell.mean)) << "\" cy=\"" << fmt2(y)
        << "\" r=\"3\" fill=\"black\"/>\n";
  }
  for (double v : {lo, 0.0, hi})
    svg << "<text x=\"" << fmt2(x_of(v)) << "\" y=\"" << fmt2(bottom + 18)
        << "\" text-anchor=\"middle\">" << fmt2(v) << "</text>\n";
  svg << "</svg>\n";
  plot.svg = svg.str();
  return plot;
}

}  // namespace ergmpool
