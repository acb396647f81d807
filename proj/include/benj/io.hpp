#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "benj/grid.hpp"

// Deterministic on-disk formats: CSV fields with an x,value header and a
// sidecar JSON describing the grid, plus a small JSON emitter that prints
// every floating-point number with 17 significant digits (so identical runs
// produce byte-identical artifacts).

namespace benj {

std::string format_real(Real v);

// Insertion-ordered JSON value.
class Json {
  public:
    static Json object();
    static Json array();
    static Json str(std::string s);
    static Json real(Real v);
    static Json integer(long long v);
    static Json boolean(bool b);
    static Json null();
    static Json real_array(const std::vector<Real>& v);

    Json& set(const std::string& key, Json v);  // object only
    Json& push(Json v);                         // array only

    std::string dump(int indent = 2) const;

  private:
    enum class Kind { Null, Bool, Int, Real, Str, Arr, Obj };
    Kind kind_ = Kind::Null;
    bool b_ = false;
    long long i_ = 0;
    Real r_ = 0;
    std::string s_;
    std::vector<Json> items_;
    std::vector<std::pair<std::string, Json>> members_;
    void dump_to(std::string& out, int indent, int depth) const;
};

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// CSV with header "x,value" plus sidecar "<path>.json" recording
// {"n": ..., "half_length": ...}.
void write_field_csv(const std::string& path, const Field& f);
Field read_field_csv(const std::string& path);

}  // namespace benj
