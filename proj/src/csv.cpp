#include "panelcurve/csv.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "panelcurve/errors.hpp"

namespace panelcurve {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string expected_header() {
    std::string h = "entity,period";
    for (const auto& v : standard_variables()) h += "," + v;
    return h;
}

double parse_number(const std::string& field, std::size_t line_no, const std::string& column) {
    double value = 0.0;
    auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || p != field.data() + field.size())
        throw DataError("ingest: row " + std::to_string(line_no) + ", column " + column +
                        ": non-numeric cell '" + field + "'");
    return value;
}

std::string format_number(double value) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, p);
}

} // namespace

PanelDataset ingest_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("ingest: empty input");
    {
        auto fields = split_fields(line);
        std::string got;
        for (std::size_t i = 0; i < fields.size(); ++i) got += (i ? "," : "") + fields[i];
        if (got != expected_header())
            throw DataError("ingest: malformed header '" + got + "', expected '" +
                            expected_header() + "'");
    }

    struct RawRow {
        std::string entity;
        Quarter period;
        std::array<Cell, 4> values;
    };
    std::vector<RawRow> rows;
    std::set<std::pair<std::string, long>> seen;
    const auto& vars = standard_variables();

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_fields(line);
        if (fields.size() != 2 + vars.size())
            throw DataError("ingest: row " + std::to_string(line_no) + ": expected " +
                            std::to_string(2 + vars.size()) + " fields, got " +
                            std::to_string(fields.size()));
        RawRow row;
        row.entity = fields[0];
        if (row.entity.empty())
            throw DataError("ingest: row " + std::to_string(line_no) + ": empty entity code");
        try {
            row.period = Quarter::parse(fields[1]);
        } catch (const DataError& e) {
            throw DataError("ingest: row " + std::to_string(line_no) + ": " + e.what());
        }
        if (!seen.insert({row.entity, row.period.index()}).second)
            throw DataError("ingest: row " + std::to_string(line_no) + ": duplicate (" +
                            row.entity + ", " + row.period.str() + ")");
        for (std::size_t v = 0; v < vars.size(); ++v) {
            const std::string& f = fields[2 + v];
            if (!f.empty()) row.values[v] = parse_number(f, line_no, vars[v]);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DataError("ingest: no data rows");

    PanelDataset data;
    {
        std::set<std::string> codes;
        long lo = rows.front().period.index(), hi = lo;
        for (const auto& r : rows) {
            codes.insert(r.entity);
            lo = std::min(lo, r.period.index());
            hi = std::max(hi, r.period.index());
        }
        data.entities.assign(codes.begin(), codes.end());
        for (long i = lo; i <= hi; ++i) data.periods.push_back(Quarter::from_index(i));
    }

    const long base = data.periods.front().index();
    for (const auto& v : vars) data.series.emplace(v, Grid(data.n_entities(), data.n_periods()));
    for (const auto& r : rows) {
        std::size_t e = data.entity_index(r.entity);
        std::size_t t = static_cast<std::size_t>(r.period.index() - base);
        for (std::size_t v = 0; v < vars.size(); ++v) data.series[vars[v]].at(e, t) = r.values[v];
    }
    data.balanced = data.compute_balanced();
    return data;
}

PanelDataset ingest_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open input file '" + path + "'");
    return ingest_csv(in);
}

void write_csv(const PanelDataset& data, std::ostream& out) {
    out << expected_header() << "\n";
    const auto& vars = standard_variables();
    std::vector<const Grid*> grids;
    for (const auto& v : vars) grids.push_back(&data.grid(v));
    for (std::size_t e = 0; e < data.n_entities(); ++e) {
        for (std::size_t t = 0; t < data.n_periods(); ++t) {
            out << data.entities[e] << ',' << data.periods[t].str();
            for (const Grid* g : grids) {
                out << ',';
                const Cell& c = g->at(e, t);
                if (c.has_value()) out << format_number(*c);
            }
            out << '\n';
        }
    }
}

void write_csv_file(const PanelDataset& data, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open output file '" + path + "'");
    write_csv(data, out);
}

std::string to_csv(const PanelDataset& data) {
    std::ostringstream out;
    write_csv(data, out);
    return out.str();
}

} // namespace panelcurve
