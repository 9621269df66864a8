#include "synthrisk/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unordered_map>

namespace synthrisk {
namespace {

// RFC-4180-style field splitting: quoted fields may contain commas, CRLF and
// doubled quotes.
std::vector<std::string> split_record(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

bool parse_double(const std::string& s, double& out) {
    const char* b = s.data();
    const char* e = s.data() + s.size();
    while (b < e && (*b == ' ' || *b == '\t')) ++b;
    while (e > b && (e[-1] == ' ' || e[-1] == '\t')) --e;
    if (b == e) return false;
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && p == e && std::isfinite(out);
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

std::vector<std::vector<std::string>> read_table(const std::string& path,
                                                 std::vector<std::string>& header) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("csv: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("csv: missing header in '" + path + "'");
    header = split_record(strip_cr(line));

    std::vector<std::vector<std::string>> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty() && in.peek() == EOF) break;  // trailing newline
        auto fields = split_record(line);
        if (fields.size() != header.size())
            throw std::runtime_error("csv: ragged row at line " + std::to_string(lineno));
        rows.push_back(std::move(fields));
    }
    if (rows.empty()) throw std::runtime_error("csv: empty table in '" + path + "'");
    return rows;
}

std::string quote_if_needed(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        out += c;
    }
    out += '"';
    return out;
}

std::string format_numeric(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

Dataset load_csv(const std::string& path, const std::optional<Schema>& schema_hints) {
    std::vector<std::string> header;
    auto rows = read_table(path, header);
    const std::size_t m = header.size();

    std::vector<Attribute> attrs(m);
    if (schema_hints) {
        if (schema_hints->size() != m)
            throw std::runtime_error("csv: header width differs from schema hints");
        for (std::size_t a = 0; a < m; ++a) {
            if (schema_hints->at(a).name != header[a])
                throw std::runtime_error("csv: header '" + header[a] + "' does not match hint '" +
                                         schema_hints->at(a).name + "'");
            attrs[a] = schema_hints->at(a);
            attrs[a].vocabulary.clear();  // rebuilt from observed values below
            if (schema_hints->at(a).kind == AttrKind::Categorical)
                attrs[a].vocabulary = schema_hints->at(a).vocabulary;
        }
    } else {
        for (std::size_t a = 0; a < m; ++a) {
            attrs[a].name = header[a];
            bool all_numeric = true;
            for (const auto& r : rows) {
                double tmp;
                if (!parse_double(r[a], tmp)) {
                    all_numeric = false;
                    break;
                }
            }
            attrs[a].kind = all_numeric ? AttrKind::Numeric : AttrKind::Categorical;
        }
    }

    // Build vocabularies in first-seen order, then the cell matrix.
    std::vector<std::unordered_map<std::string, std::size_t>> level_index(m);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t i = 0; i < attrs[a].vocabulary.size(); ++i)
            level_index[a][attrs[a].vocabulary[i]] = i;

    std::vector<Cell> cells;
    cells.reserve(rows.size() * m);
    for (const auto& r : rows) {
        for (std::size_t a = 0; a < m; ++a) {
            if (r[a].empty())
                throw std::runtime_error("csv: empty cell in column '" + header[a] + "'");
            if (attrs[a].kind == AttrKind::Numeric) {
                double v;
                if (!parse_double(r[a], v))
                    throw std::runtime_error("csv: cell '" + r[a] + "' in numeric column '" +
                                             header[a] + "' is not a number");
                cells.push_back(v);
            } else {
                auto it = level_index[a].find(r[a]);
                std::size_t idx;
                if (it == level_index[a].end()) {
                    idx = attrs[a].vocabulary.size();
                    attrs[a].vocabulary.push_back(r[a]);
                    level_index[a][r[a]] = idx;
                } else {
                    idx = it->second;
                }
                cells.push_back(static_cast<Cell>(idx));
            }
        }
    }
    return Dataset(Schema(std::move(attrs)), std::move(cells));
}

void save_csv(const Dataset& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("csv: cannot write '" + path + "'");
    const auto& schema = data.schema();
    for (std::size_t a = 0; a < schema.size(); ++a) {
        if (a) out << ',';
        out << quote_if_needed(schema.at(a).name);
    }
    out << '\n';
    for (std::size_t r = 0; r < data.n_rows(); ++r) {
        for (std::size_t a = 0; a < schema.size(); ++a) {
            if (a) out << ',';
            const Cell v = data.at(r, a);
            if (schema.at(a).kind == AttrKind::Numeric)
                out << format_numeric(v);
            else
                out << quote_if_needed(schema.at(a).vocabulary.at(static_cast<std::size_t>(v)));
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("csv: write failed for '" + path + "'");
}

Dataset load_external_synth(const std::string& path, Schema schema) {
    std::vector<std::string> header;
    auto rows = read_table(path, header);
    if (header.size() != schema.size())
        throw std::runtime_error("external synth: column count mismatch");
    for (std::size_t a = 0; a < schema.size(); ++a)
        if (header[a] != schema.at(a).name)
            throw std::runtime_error("external synth: header mismatch at column '" + header[a] + "'");

    std::vector<Cell> cells;
    cells.reserve(rows.size() * schema.size());
    for (const auto& r : rows) {
        for (std::size_t a = 0; a < schema.size(); ++a) {
            if (schema.at(a).kind == AttrKind::Numeric) {
                double v;
                if (!parse_double(r[a], v))
                    throw std::runtime_error("external synth: non-numeric cell in '" +
                                             schema.at(a).name + "'");
                cells.push_back(v);
            } else {
                auto lvl = schema.level_of(a, r[a]);
                if (!lvl) {
                    std::cerr << "warning: external synth adds level '" << r[a] << "' to '"
                              << schema.at(a).name << "'\n";
                    lvl = schema.add_level(a, r[a]);
                }
                cells.push_back(static_cast<Cell>(*lvl));
            }
        }
    }
    return Dataset(std::move(schema), std::move(cells));
}

}  // namespace synthrisk
