#include "core/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace latcart {

namespace {

void write_u64_le(std::string& out, std::uint64_t v) {
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
}

std::uint64_t read_u64_le(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(p[b]) << (8 * b);
    return v;
}

void atomic_write(const std::string& path, const std::string& bytes) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot open for writing: " + tmp);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw InputError("write failed: " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw InputError("rename failed: " + path + ": " + ec.message());
}

std::string read_all(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open: " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return bytes;
}

std::string field_bytes(const char* kind, const std::vector<std::int64_t>& shape,
                        const GridSpec& spec, const double* values, std::int64_t count,
                        const bool* dist) {
    nlohmann::ordered_json header;
    header["kind"] = kind;
    header["shape"] = shape;
    header["bounds"] = {{spec.min1, spec.max1}, {spec.min2, spec.max2}};
    if (dist) header["dist"] = *dist;
    std::string hj = header.dump();
    std::string out;
    out.reserve(8 + hj.size() + static_cast<std::size_t>(count) * 8);
    out += "LCF1";
    std::uint32_t hl = static_cast<std::uint32_t>(hj.size());
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((hl >> (8 * b)) & 0xFF));
    out += hj;
    for (std::int64_t i = 0; i < count; ++i) {
        if (!std::isfinite(values[i]))
            throw FormatError("field contains a non-finite value",
                              8 + static_cast<std::int64_t>(hj.size()) + i * 8);
        write_u64_le(out, std::bit_cast<std::uint64_t>(values[i]));
    }
    return out;
}

struct ParsedField {
    std::string kind;
    std::vector<std::int64_t> shape;
    GridSpec spec;
    bool dist = false;
    bool has_dist = false;
    std::vector<double> values;
};

ParsedField parse_field(const std::string& path) {
    std::string bytes = read_all(path);
    if (bytes.size() < 4 || bytes.compare(0, 4, "LCF1") != 0)
        throw FormatError("bad magic, expected LCF1", 0);
    if (bytes.size() < 8) throw FormatError("truncated header length", 4);
    const unsigned char* u = reinterpret_cast<const unsigned char*>(bytes.data());
    std::uint32_t hl = 0;
    for (int b = 0; b < 4; ++b) hl |= static_cast<std::uint32_t>(u[4 + b]) << (8 * b);
    if (bytes.size() < 8 + static_cast<std::size_t>(hl))
        throw FormatError("truncated header", 8);
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(bytes.substr(8, hl));
    } catch (const nlohmann::json::exception& ex) {
        throw FormatError(std::string("header is not valid JSON: ") + ex.what(), 8);
    }
    ParsedField f;
    try {
        f.kind = header.at("kind").get<std::string>();
        f.shape = header.at("shape").get<std::vector<std::int64_t>>();
        auto b = header.at("bounds");
        f.spec.min1 = b.at(0).at(0).get<double>();
        f.spec.max1 = b.at(0).at(1).get<double>();
        f.spec.min2 = b.at(1).at(0).get<double>();
        f.spec.max2 = b.at(1).at(1).get<double>();
        if (header.contains("dist")) {
            f.dist = header.at("dist").get<bool>();
            f.has_dist = true;
        }
    } catch (const nlohmann::json::exception& ex) {
        throw FormatError(std::string("bad header contents: ") + ex.what(), 8);
    }
    if (f.kind != "meaning" && f.kind != "measure" && f.kind != "transform")
        throw FormatError("unknown kind: " + f.kind, 8);
    std::size_t arity = f.kind == "measure" ? 2 : 3;
    if (f.shape.size() != arity)
        throw FormatError("kind " + f.kind + " requires shape arity " + std::to_string(arity), 8);
    std::int64_t count = 1;
    for (std::int64_t s : f.shape) {
        if (s < 1) throw FormatError("non-positive shape entry", 8);
        count *= s;
    }
    if (f.shape[0] > (1 << 30) || f.shape[1] > (1 << 30) || count > (1LL << 33))
        throw FormatError("shape too large", 8);
    if (f.kind == "transform" && f.shape[2] != 2)
        throw FormatError("transform payload must have 2 components per cell", 8);
    f.spec.n1 = static_cast<int>(f.shape[0]);
    f.spec.n2 = static_cast<int>(f.shape[1]);
    std::int64_t payload_off = 8 + static_cast<std::int64_t>(hl);
    std::int64_t have = static_cast<std::int64_t>(bytes.size()) - payload_off;
    if (have != count * 8)
        throw FormatError("payload holds " + std::to_string(have / 8) + " values, expected " +
                              std::to_string(count),
                          payload_off);
    f.values.resize(count);
    for (std::int64_t i = 0; i < count; ++i) {
        f.values[i] = std::bit_cast<double>(read_u64_le(u + payload_off + i * 8));
        if (!std::isfinite(f.values[i]))
            throw FormatError("non-finite value in payload", payload_off + i * 8);
    }
    try {
        validate_grid(f.spec);
    } catch (const InputError& ex) {
        throw FormatError(std::string("bad bounds: ") + ex.what(), 8);
    }
    return f;
}

} // namespace

FieldKind probe_field(const std::string& path) {
    ParsedField f = parse_field(path);
    if (f.kind == "meaning") return FieldKind::meaning;
    if (f.kind == "measure") return FieldKind::measure;
    return FieldKind::transform;
}

void save_field(const std::string& path, const MeaningField& f) {
    validate_meaning(f);
    bool dist = f.distribution;
    atomic_write(path, field_bytes("meaning", {f.spec.n1, f.spec.n2, f.dh}, f.spec,
                                   f.values.data(), static_cast<std::int64_t>(f.values.size()),
                                   &dist));
}

void save_field(const std::string& path, const MeasureField& f) {
    validate_measure(f, false);
    atomic_write(path, field_bytes("measure", {f.spec.n1, f.spec.n2}, f.spec, f.values.data(),
                                   static_cast<std::int64_t>(f.values.size()), nullptr));
}

void save_field(const std::string& path, const TransformField& f) {
    validate_transform(f);
    atomic_write(path, field_bytes("transform", {f.spec.n1, f.spec.n2, 2}, f.spec,
                                   f.positions.data(), static_cast<std::int64_t>(f.positions.size()),
                                   nullptr));
}

MeaningField load_meaning(const std::string& path) {
    ParsedField p = parse_field(path);
    if (p.kind != "meaning") throw FormatError("expected kind meaning, found " + p.kind, 8);
    MeaningField f;
    f.spec = p.spec;
    f.dh = static_cast<int>(p.shape[2]);
    f.distribution = p.has_dist && p.dist;
    f.values = std::move(p.values);
    validate_meaning(f);
    return f;
}

MeasureField load_measure(const std::string& path) {
    ParsedField p = parse_field(path);
    if (p.kind != "measure") throw FormatError("expected kind measure, found " + p.kind, 8);
    MeasureField f;
    f.spec = p.spec;
    f.values = std::move(p.values);
    validate_measure(f, false);
    return f;
}

TransformField load_transform(const std::string& path) {
    ParsedField p = parse_field(path);
    if (p.kind != "transform") throw FormatError("expected kind transform, found " + p.kind, 8);
    TransformField f;
    f.spec = p.spec;
    f.positions = std::move(p.values);
    validate_transform(f);
    return f;
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void save_embeddings(const std::string& path, const EmbeddingSet& e) {
    validate_embeddings(e);
    std::string out = e.labeled() ? "z1,z2,label\n" : "z1,z2\n";
    for (std::int64_t i = 0; i < e.size(); ++i) {
        out += format_double(e.xy[2 * i]);
        out += ',';
        out += format_double(e.xy[2 * i + 1]);
        if (e.labeled()) {
            const std::string& lab = e.labels[i];
            if (lab.find(',') != std::string::npos || lab.find('\n') != std::string::npos ||
                lab.find('\r') != std::string::npos)
                throw InputError("labels may not contain commas or line breaks");
            out += ',';
            out += lab;
        }
        out += '\n';
    }
    atomic_write(path, out);
}

EmbeddingSet load_embeddings(const std::string& path) {
    std::string bytes = read_all(path);
    EmbeddingSet e;
    std::size_t pos = 0;
    std::int64_t line_no = 0;
    bool labeled = false;
    bool saw_header = false;
    while (pos < bytes.size()) {
        std::size_t eol = bytes.find('\n', pos);
        if (eol == std::string::npos) eol = bytes.size();
        std::string line = bytes.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        pos = eol + 1;
        ++line_no;
        if (line.empty() && pos >= bytes.size()) break;
        if (!saw_header) {
            if (line == "z1,z2")
                labeled = false;
            else if (line == "z1,z2,label")
                labeled = true;
            else
                throw FormatError("expected header 'z1,z2' or 'z1,z2,label'", line_no);
            saw_header = true;
            continue;
        }
        std::size_t c1 = line.find(',');
        if (c1 == std::string::npos) throw FormatError("row needs at least 2 columns", line_no);
        std::size_t c2 = line.find(',', c1 + 1);
        std::string f1 = line.substr(0, c1);
        std::string f2, lab;
        if (labeled) {
            if (c2 == std::string::npos) throw FormatError("row has 2 columns, header has 3", line_no);
            f2 = line.substr(c1 + 1, c2 - c1 - 1);
            lab = line.substr(c2 + 1);
            if (lab.find(',') != std::string::npos) throw FormatError("row has too many columns", line_no);
        } else {
            if (c2 != std::string::npos) throw FormatError("row has 3 columns, header has 2", line_no);
            f2 = line.substr(c1 + 1);
        }
        double x = 0, y = 0;
        auto r1 = std::from_chars(f1.data(), f1.data() + f1.size(), x);
        auto r2 = std::from_chars(f2.data(), f2.data() + f2.size(), y);
        if (r1.ec != std::errc() || r1.ptr != f1.data() + f1.size() || r2.ec != std::errc() ||
            r2.ptr != f2.data() + f2.size())
            throw FormatError("unparseable coordinate", line_no);
        if (!std::isfinite(x) || !std::isfinite(y))
            throw FormatError("non-finite coordinate", line_no);
        e.xy.push_back(x);
        e.xy.push_back(y);
        if (labeled) e.labels.push_back(lab);
    }
    if (!saw_header) throw FormatError("missing header", 1);
    if (e.size() == 0) throw InputError("embeddings file has no data rows: " + path);
    return e;
}

} // namespace latcart
