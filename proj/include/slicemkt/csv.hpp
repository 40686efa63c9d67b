#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace slicemkt::csv {

/// Deterministic numeric formatting: %.12g, "nan" for NaN, no locale.
inline std::string num(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::string(buf);
}

/// Minimal row builder; all emitted fields are numeric or plain tokens, so
/// no quoting is ever needed.
class Row {
  public:
    explicit Row(std::ostream& os) : os_(os) {}
    Row& field(const std::string& s) {
        sep();
        os_ << s;
        return *this;
    }
    Row& field(const char* s) { return field(std::string(s)); }
    Row& field(double v) { return field(num(v)); }
    Row& field(int v) { return field(std::to_string(v)); }
    Row& field(unsigned long long v) { return field(std::to_string(v)); }
    Row& field(bool v) { return field(std::string(v ? "1" : "0")); }
    void end() { os_ << '\n'; }

  private:
    void sep() {
        if (!first_) os_ << ',';
        first_ = false;
    }
    std::ostream& os_;
    bool first_ = true;
};

}  // namespace slicemkt::csv
