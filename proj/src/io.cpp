#include "plank/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace plank {

namespace {

using ordered_json = nlohmann::ordered_json;

std::pair<int, int> locate(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

std::string slurp(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ParseFailure("cannot open " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

ordered_json parse_checked(const std::string& text) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = locate(text, e.byte > 0 ? e.byte - 1 : 0);
    std::string what = e.what();
    // strip the "[json.exception...] parse error at ..." preamble; the
    // location is reported through the line/column fields instead
    if (const auto cut = what.find("] "); cut != std::string::npos) what = what.substr(cut + 2);
    if (what.rfind("parse error at line", 0) == 0) {
      if (const auto colon = what.find(": "); colon != std::string::npos)
        what = what.substr(colon + 2);
    }
    throw ParseFailure(what, line, col);
  }
}

bool looks_like_json(const std::string& text) {
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
    return c == '{' || c == '[';
  }
  return false;
}

Eigen::MatrixXd matrix_from_json(const ordered_json& arr, const std::string& what) {
  if (!arr.is_array() || arr.empty())
    throw ParseFailure(what + " must be a nonempty array of rows");
  const std::size_t rows = arr.size();
  std::size_t cols = 0;
  Eigen::MatrixXd m;
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& row = arr[i];
    if (!row.is_array() || row.empty())
      throw ParseFailure(what + " row " + std::to_string(i + 1) + " must be a nonempty array");
    if (i == 0) {
      cols = row.size();
      m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    } else if (row.size() != cols) {
      throw ParseFailure(what + " row " + std::to_string(i + 1) + " has " +
                         std::to_string(row.size()) + " entries, expected " +
                         std::to_string(cols));
    }
    for (std::size_t j = 0; j < cols; ++j) {
      if (!row[j].is_number())
        throw ParseFailure(what + " entry (" + std::to_string(i + 1) + "," +
                           std::to_string(j + 1) + ") is not a number");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j].get<double>();
    }
  }
  return m;
}

std::string kind_of(const ordered_json& doc) {
  if (!doc.is_object()) throw ParseFailure("top-level JSON value must be an object");
  if (!doc.contains("kind") || !doc["kind"].is_string())
    throw ParseFailure("missing string field \"kind\"");
  return doc["kind"].get<std::string>();
}

Eigen::MatrixXd csv_rows(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    int col = 0;
    while (std::getline(cells, cell, ',')) {
      ++col;
      try {
        std::size_t used = 0;
        const double value = std::stod(cell, &used);
        while (used < cell.size() &&
               (cell[used] == ' ' || cell[used] == '\t' || cell[used] == '\r'))
          ++used;
        if (used != cell.size()) throw std::invalid_argument("trailing characters");
        row.push_back(value);
      } catch (const std::exception&) {
        throw ParseFailure("not a number: \"" + cell + "\"", lineno, col);
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseFailure("expected " + std::to_string(rows.front().size()) + " entries, got " +
                             std::to_string(row.size()),
                         lineno, 1);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseFailure("no rows found");
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.front().size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

UnitVectorSet vectors_from_doc(const ordered_json& doc) {
  const std::string kind = kind_of(doc);
  if (kind != "vectors")
    throw ParseFailure("expected kind \"vectors\", found \"" + kind + "\"");
  if (!doc.contains("vectors"))
    throw ParseFailure("missing field \"vectors\"");
  Eigen::MatrixXd rows = matrix_from_json(doc["vectors"], "\"vectors\"");
  if (doc.contains("n") && doc["n"].is_number_integer() &&
      doc["n"].get<long long>() != rows.rows())
    throw ParseFailure("field \"n\" disagrees with the number of vectors");
  if (doc.contains("d") && doc["d"].is_number_integer() &&
      doc["d"].get<long long>() != rows.cols())
    throw ParseFailure("field \"d\" disagrees with the vector length");
  try {
    return UnitVectorSet::from_rows(std::move(rows));
  } catch (const std::invalid_argument& e) {
    throw ParseFailure(e.what());
  }
}

}  // namespace

ParseFailure::ParseFailure(const std::string& message, int line, int column)
    : std::runtime_error(message), line_(line), column_(column) {}

UnitVectorSet read_vectors(const std::filesystem::path& file) {
  const std::string text = slurp(file);
  if (looks_like_json(text)) return vectors_from_doc(parse_checked(text));
  try {
    return UnitVectorSet::from_rows(csv_rows(text));
  } catch (const std::invalid_argument& e) {
    throw ParseFailure(e.what());
  }
}

std::string vectors_to_json(const UnitVectorSet& vs) {
  ordered_json doc;
  doc["schema"] = "1";
  doc["kind"] = "vectors";
  doc["n"] = vs.count();
  doc["d"] = vs.dim();
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < vs.count(); ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 0; j < vs.dim(); ++j) row.push_back(vs.rows()(i, j));
    rows.push_back(std::move(row));
  }
  doc["vectors"] = std::move(rows);
  return doc.dump(2) + "\n";
}

std::string gram_to_json(const GramMatrix& H) {
  ordered_json doc;
  doc["schema"] = "1";
  doc["kind"] = "gram";
  doc["n"] = H.size();
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < H.size(); ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 0; j < H.size(); ++j) row.push_back(H.mat()(i, j));
    rows.push_back(std::move(row));
  }
  doc["entries"] = std::move(rows);
  return doc.dump(2) + "\n";
}

Instance read_instance(const std::filesystem::path& file) {
  const std::string text = slurp(file);
  if (!looks_like_json(text)) {
    UnitVectorSet vs = [&] {
      try {
        return UnitVectorSet::from_rows(csv_rows(text));
      } catch (const std::invalid_argument& e) {
        throw ParseFailure(e.what());
      }
    }();
    GramMatrix H = gram(vs);
    return Instance{std::move(vs), std::move(H)};
  }
  const ordered_json doc = parse_checked(text);
  const std::string kind = kind_of(doc);
  if (kind == "vectors") {
    UnitVectorSet vs = vectors_from_doc(doc);
    GramMatrix H = gram(vs);
    return Instance{std::move(vs), std::move(H)};
  }
  if (kind == "gram") {
    if (!doc.contains("entries")) throw ParseFailure("missing field \"entries\"");
    Eigen::MatrixXd m = matrix_from_json(doc["entries"], "\"entries\"");
    if (m.rows() != m.cols()) throw ParseFailure("\"entries\" must be square");
    try {
      return Instance{std::nullopt, GramMatrix::from_entries(std::move(m))};
    } catch (const std::invalid_argument& e) {
      throw ParseFailure(e.what());
    }
  }
  throw ParseFailure("unsupported kind \"" + kind + "\" (expected vectors or gram)");
}

std::vector<Zone> read_zones(const std::filesystem::path& file) {
  const ordered_json doc = parse_checked(slurp(file));
  const std::string kind = kind_of(doc);
  if (kind != "zones")
    throw ParseFailure("expected kind \"zones\", found \"" + kind + "\"");
  if (!doc.contains("zones") || !doc["zones"].is_array())
    throw ParseFailure("missing array field \"zones\"");
  std::vector<Zone> zones;
  int index = 0;
  for (const auto& z : doc["zones"]) {
    ++index;
    const std::string where = "zone " + std::to_string(index);
    if (!z.is_object() || !z.contains("normal") || !z.contains("width"))
      throw ParseFailure(where + " needs \"normal\" and \"width\"");
    const auto& nr = z["normal"];
    if (!nr.is_array() || nr.size() != 3)
      throw ParseFailure(where + ": \"normal\" must have 3 components");
    Eigen::Vector3d normal;
    for (int j = 0; j < 3; ++j) {
      if (!nr[j].is_number()) throw ParseFailure(where + ": normal components must be numbers");
      normal(j) = nr[j].get<double>();
    }
    if (!z["width"].is_number()) throw ParseFailure(where + ": \"width\" must be a number");
    try {
      zones.emplace_back(normal, z["width"].get<double>());
    } catch (const std::invalid_argument& e) {
      throw ParseFailure(where + ": " + e.what());
    }
  }
  if (zones.empty()) throw ParseFailure("zone list is empty");
  return zones;
}

std::string zones_to_json(const std::vector<Zone>& zones) {
  ordered_json doc;
  doc["schema"] = "1";
  doc["kind"] = "zones";
  ordered_json list = ordered_json::array();
  for (const auto& z : zones) {
    ordered_json item;
    item["normal"] = {z.normal()(0), z.normal()(1), z.normal()(2)};
    item["width"] = z.width();
    list.push_back(std::move(item));
  }
  doc["zones"] = std::move(list);
  return doc.dump(2) + "\n";
}

}  // namespace plank
