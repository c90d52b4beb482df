#include "ratefix/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "ratefix/errors.hpp"

namespace ratefix {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

std::size_t parse_index(const std::string& field, std::size_t row, std::size_t col) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw ParseError("row " + std::to_string(row) + ", column " + std::to_string(col + 1) +
                         ": expected a non-negative integer index, got \"" + field + "\"");
    return value;
}

double parse_number(const std::string& field, std::size_t row, std::size_t col) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw ParseError("row " + std::to_string(row) + ", column " + std::to_string(col + 1) +
                         ": expected a number, got \"" + field + "\"");
    return value;
}

std::string index_name(const std::vector<std::size_t>& idx) {
    std::string s = "(";
    for (std::size_t a = 0; a < idx.size(); ++a) {
        if (a) s += ",";
        s += std::to_string(idx[a]);
    }
    return s + ")";
}

}  // namespace

RatingData parse_rating_csv_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t row = 0;

    if (!std::getline(in, line)) throw ParseError("empty input: header row required");
    ++row;
    std::vector<std::string> header = split_fields(line);
    if (header.size() < 4)
        throw ParseError("header must have at least two index columns plus exposure,loss");
    if (header[header.size() - 2] != "exposure" || header.back() != "loss")
        throw ParseError("last two header columns must be named exposure,loss");
    const std::size_t rank = header.size() - 2;
    std::vector<std::string> axis_names(header.begin(), header.begin() + rank);

    struct Row {
        std::vector<std::size_t> idx;
        double exposure;
        double loss;
        std::size_t source_row;
    };
    std::vector<Row> rows;
    std::vector<std::size_t> dims(rank, 0);

    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        std::vector<std::string> fields = split_fields(line);
        if (fields.size() != header.size())
            throw ParseError("row " + std::to_string(row) + ": expected " +
                             std::to_string(header.size()) + " fields, got " +
                             std::to_string(fields.size()));
        Row r;
        r.source_row = row;
        r.idx.resize(rank);
        for (std::size_t a = 0; a < rank; ++a) {
            r.idx[a] = parse_index(fields[a], row, a);
            dims[a] = std::max(dims[a], r.idx[a] + 1);
        }
        r.exposure = parse_number(fields[rank], row, rank);
        r.loss = parse_number(fields[rank + 1], row, rank + 1);
        if (r.exposure < 0.0)
            throw ParseError("row " + std::to_string(row) + ": exposure must be non-negative");
        if (r.loss < 0.0)
            throw ParseError("row " + std::to_string(row) + ": loss must be non-negative");
        rows.push_back(std::move(r));
    }
    if (rows.empty()) throw ParseError("no data rows");

    std::size_t cells = 1;
    for (std::size_t d : dims) cells *= d;

    std::vector<double> losses(cells, 0.0), exposures(cells, 0.0);
    std::vector<bool> seen(cells, false);
    std::vector<std::size_t> strides(rank, 1);
    for (std::size_t a = rank; a-- > 1;) strides[a - 1] = strides[a] * dims[a];

    for (const Row& r : rows) {
        std::size_t flat = 0;
        for (std::size_t a = 0; a < rank; ++a) flat += r.idx[a] * strides[a];
        if (seen[flat])
            throw ParseError("row " + std::to_string(r.source_row) + ": duplicate cell " +
                             index_name(r.idx));
        seen[flat] = true;
        losses[flat] = r.loss;
        exposures[flat] = r.exposure;
    }
    for (std::size_t flat = 0; flat < cells; ++flat)
        if (!seen[flat]) {
            std::vector<std::size_t> idx(rank);
            std::size_t rest = flat;
            for (std::size_t a = 0; a < rank; ++a) {
                idx[a] = rest / strides[a];
                rest %= strides[a];
            }
            throw MissingCell("dense grid incomplete: no row for cell " + index_name(idx));
        }

    return RatingData{RiskTensor(dims, std::move(losses), axis_names),
                      RiskTensor(dims, std::move(exposures), axis_names)};
}

RatingData parse_rating_csv(const std::string& path) {
    return parse_rating_csv_text(read_file(path));
}

RatingProblem ingest_rating_csv(const std::string& path, double plr, bool strict,
                                const std::optional<std::vector<std::size_t>>& base_cell) {
    RatingData data = parse_rating_csv(path);
    if (base_cell) {
        if (base_cell->size() != data.losses.rank())
            throw InvalidArgument("base cell must list one index per factor");
        for (std::size_t a = 0; a < base_cell->size(); ++a) {
            data.losses.swap_slice_to_front(a, (*base_cell)[a]);
            data.exposures.swap_slice_to_front(a, (*base_cell)[a]);
        }
    }
    return RatingProblem(std::move(data.losses), std::move(data.exposures), plr, strict);
}

BaileyProblem to_bailey_problem(const RatingData& data) {
    if (data.losses.rank() != 2)
        throw InvalidArgument("minimum-bias fit needs exactly two factors, got " +
                              std::to_string(data.losses.rank()));
    const std::size_t m = data.losses.dim(0), n = data.losses.dim(1);
    std::vector<double> costs(m * n), weights(m * n);
    for (std::size_t c = 0; c < m * n; ++c) {
        double e = data.exposures[c];
        if (!(e > 0.0)) {
            std::vector<std::size_t> idx = {c / n, c % n};
            throw ZeroExposure("minimum-bias fit needs positive exposure in every cell; cell " +
                               index_name(idx) + " has zero");
        }
        weights[c] = e;
        costs[c] = data.losses[c] / e;
    }
    return BaileyProblem(m, n, std::move(costs), std::move(weights));
}

LGModel parse_lg_json_text(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("b") || !doc.contains("C"))
        throw ParseError("model JSON must be an object with \"b\" and \"C\"");
    if (!doc["b"].is_array() || !doc["C"].is_array())
        throw ParseError("\"b\" and \"C\" must be arrays");

    std::vector<double> b;
    for (const auto& v : doc["b"]) {
        if (!v.is_number()) throw ParseError("\"b\" entries must be numbers");
        b.push_back(v.get<double>());
    }
    const std::size_t d = b.size();
    if (doc["C"].size() != d * d)
        throw ParseError("\"C\" must be a row-major array of " + std::to_string(d * d) +
                         " numbers");
    Matrix c(d, d);
    std::size_t pos = 0;
    for (const auto& v : doc["C"]) {
        if (!v.is_number()) throw ParseError("\"C\" entries must be numbers");
        c.data[pos++] = v.get<double>();
    }
    try {
        return LGModel(std::move(b), std::move(c));
    } catch (const InvalidArgument& e) {
        throw ParseError(e.what());
    } catch (const DimensionMismatch& e) {
        throw ParseError(e.what());
    }
}

LGModel ingest_lg_json(const std::string& path) { return parse_lg_json_text(read_file(path)); }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp + " for writing");
        out << content;
        if (!out) throw Error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw Error("cannot rename " + tmp + " to " + path);
    }
}

}  // namespace ratefix
