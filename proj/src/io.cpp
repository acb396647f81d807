#include "benj/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace benj {

std::string format_real(Real v) {
    if (std::isnan(v)) return "null";
    if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Json Json::object() {
    Json j;
    j.kind_ = Kind::Obj;
    return j;
}
Json Json::array() {
    Json j;
    j.kind_ = Kind::Arr;
    return j;
}
Json Json::str(std::string s) {
    Json j;
    j.kind_ = Kind::Str;
    j.s_ = std::move(s);
    return j;
}
Json Json::real(Real v) {
    Json j;
    j.kind_ = Kind::Real;
    j.r_ = v;
    return j;
}
Json Json::integer(long long v) {
    Json j;
    j.kind_ = Kind::Int;
    j.i_ = v;
    return j;
}
Json Json::boolean(bool b) {
    Json j;
    j.kind_ = Kind::Bool;
    j.b_ = b;
    return j;
}
Json Json::null() { return Json(); }

Json Json::real_array(const std::vector<Real>& v) {
    Json j = array();
    for (Real x : v) j.push(real(x));
    return j;
}

Json& Json::set(const std::string& key, Json v) {
    if (kind_ != Kind::Obj) throw std::logic_error("Json::set on non-object");
    for (auto& kv : members_)
        if (kv.first == key) {
            kv.second = std::move(v);
            return *this;
        }
    members_.emplace_back(key, std::move(v));
    return *this;
}

Json& Json::push(Json v) {
    if (kind_ != Kind::Arr) throw std::logic_error("Json::push on non-array");
    items_.push_back(std::move(v));
    return *this;
}

namespace {
void escape_to(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}
}  // namespace

void Json::dump_to(std::string& out, int indent, int depth) const {
    const std::string pad(static_cast<size_t>(indent) * (depth + 1), ' ');
    const std::string pad_end(static_cast<size_t>(indent) * depth, ' ');
    switch (kind_) {
        case Kind::Null: out += "null"; break;
        case Kind::Bool: out += b_ ? "true" : "false"; break;
        case Kind::Int: out += std::to_string(i_); break;
        case Kind::Real: out += format_real(r_); break;
        case Kind::Str: escape_to(out, s_); break;
        case Kind::Arr:
            if (items_.empty()) {
                out += "[]";
                break;
            }
            out += "[\n";
            for (size_t i = 0; i < items_.size(); ++i) {
                out += pad;
                items_[i].dump_to(out, indent, depth + 1);
                if (i + 1 < items_.size()) out += ',';
                out += '\n';
            }
            out += pad_end + "]";
            break;
        case Kind::Obj:
            if (members_.empty()) {
                out += "{}";
                break;
            }
            out += "{\n";
            for (size_t i = 0; i < members_.size(); ++i) {
                out += pad;
                escape_to(out, members_[i].first);
                out += ": ";
                members_[i].second.dump_to(out, indent, depth + 1);
                if (i + 1 < members_.size()) out += ',';
                out += '\n';
            }
            out += pad_end + "}";
            break;
    }
}

std::string Json::dump(int indent) const {
    std::string out;
    dump_to(out, indent, 0);
    out += '\n';
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
    if (!f) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_field_csv(const std::string& path, const Field& f) {
    std::string out = "x,value\n";
    for (int j = 0; j < f.grid.n; ++j) {
        out += format_real(f.grid.x[j]);
        out += ',';
        out += format_real(f.values[j]);
        out += '\n';
    }
    write_text_file(path, out);
    Json meta = Json::object();
    meta.set("n", Json::integer(f.grid.n));
    meta.set("half_length", Json::real(f.grid.half_length));
    write_text_file(path + ".json", meta.dump());
}

Field read_field_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open field CSV: " + path);
    std::string line;
    if (!std::getline(f, line) || line.rfind("x,value", 0) != 0)
        throw std::runtime_error("field CSV missing x,value header: " + path);
    std::vector<Real> xs, vs;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("malformed field CSV row: " + line);
        xs.push_back(std::stod(line.substr(0, comma)));
        vs.push_back(std::stod(line.substr(comma + 1)));
    }
    const int n = static_cast<int>(xs.size());
    if (n < 8) throw std::runtime_error("field CSV too short: " + path);
    const Real half_length = -xs.front();
    Grid g = make_grid(n, half_length);
    for (int j = 0; j < n; ++j)
        if (std::abs(g.x[j] - xs[j]) > 1e-9 * std::max(1.0, half_length))
            throw std::runtime_error("field CSV nodes are not a uniform [-L, L) grid: " + path);
    Vec values(n);
    for (int j = 0; j < n; ++j) values[j] = vs[j];
    return Field(g, std::move(values));
}

}  // namespace benj
