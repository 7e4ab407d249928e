#include "oraq/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace oraq {

namespace {

std::string trim_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

[[noreturn]] void fail(const std::string& context, size_t line_no, const std::string& what) {
    throw std::runtime_error(context + ":" + std::to_string(line_no) + ": " + what);
}

double parse_double(const std::string& field, const std::string& context, size_t line_no) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) fail(context, line_no, "bad float '" + field + "'");
    return value;
}

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace

Dataset read_dataset(std::istream& in, const std::string& context) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(context + ": empty file, expected header");
    line = trim_cr(line);
    bool with_oracle = false;
    if (line == "id,proxy_dist,oracle_dist")
        with_oracle = true;
    else if (line != "id,proxy_dist")
        fail(context, 1, "bad header '" + line + "'");

    std::vector<ObjectRecord> records;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim_cr(line);
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string f_id, f_proxy, f_oracle;
        if (!std::getline(row, f_id, ',') || !std::getline(row, f_proxy, ','))
            fail(context, line_no, "expected at least 2 comma-separated fields");
        ObjectRecord rec;
        uint64_t id = 0;
        auto [ptr, ec] = std::from_chars(f_id.data(), f_id.data() + f_id.size(), id);
        if (ec != std::errc() || ptr != f_id.data() + f_id.size())
            fail(context, line_no, "bad id '" + f_id + "'");
        rec.id = id;
        rec.proxy_dist = parse_double(f_proxy, context, line_no);
        if (with_oracle) {
            if (!std::getline(row, f_oracle, ',')) fail(context, line_no, "missing oracle_dist field");
            rec.oracle_dist = parse_double(f_oracle, context, line_no);
        } else if (std::getline(row, f_oracle, ',')) {
            fail(context, line_no, "unexpected extra field");
        }
        records.push_back(rec);
    }
    try {
        return build_index(std::move(records));
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(context + ": " + e.what());
    }
}

Dataset load_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(path + ": cannot open for reading");
    return read_dataset(in, path);
}

void write_dataset(std::ostream& out, const Dataset& ds) {
    const bool with_oracle = ds.has_oracle_dists();
    out << (with_oracle ? "id,proxy_dist,oracle_dist" : "id,proxy_dist") << "\n";
    for (const auto& rec : ds.by_rank()) {
        out << rec.id << ',' << format_double(rec.proxy_dist);
        if (with_oracle) out << ',' << format_double(*rec.oracle_dist);
        out << "\n";
    }
}

void save_dataset(const std::string& path, const Dataset& ds) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    write_dataset(out, ds);
    out.flush();
    if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace oraq
