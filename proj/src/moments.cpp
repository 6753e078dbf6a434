#include "shotkit/moments.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>

namespace shotkit {

namespace {

// --- strict grammar ----------------------------------------------------------
//
//   list   := ws '[' ws ( ']' | pair (ws ',' ws pair)* ws ']' ) ws EOF
//   pair   := '[' ws number ws ',' ws number ws ']'
//   number := '-'? (digits ['.' digits*] | '.' digits)     (no exponents)
//
// The scanner works on byte offsets so strict-mode errors can name the spot.

struct Scanner {
    std::string_view text;
    std::size_t pos = 0;

    bool eof() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }

    void skip_ws() {
        while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r' || peek() == '\n')) {
            ++pos;
        }
    }

    bool consume(char c) {
        if (!eof() && peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }
};

std::optional<double> scan_number(Scanner& s) {
    const std::size_t start = s.pos;
    std::size_t p = s.pos;
    const std::string_view t = s.text;
    if (p < t.size() && t[p] == '-') ++p;
    std::size_t digits = 0;
    while (p < t.size() && std::isdigit(static_cast<unsigned char>(t[p]))) ++p, ++digits;
    if (p < t.size() && t[p] == '.') {
        ++p;
        std::size_t frac = 0;
        while (p < t.size() && std::isdigit(static_cast<unsigned char>(t[p]))) ++p, ++frac;
        if (digits == 0 && frac == 0) return std::nullopt;  // bare '.' or '-.'
    } else if (digits == 0) {
        return std::nullopt;
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(t.data() + start, t.data() + p, value);
    if (ec != std::errc{}) return std::nullopt;
    // from_chars may stop early on inputs like "5." — the trailing dot is
    // part of our token but contributes nothing to the value.
    (void)ptr;
    s.pos = p;
    return value;
}

std::optional<Moment> scan_pair(Scanner& s) {
    if (!s.consume('[')) return std::nullopt;
    s.skip_ws();
    auto start = scan_number(s);
    if (!start) return std::nullopt;
    s.skip_ws();
    if (!s.consume(',')) return std::nullopt;
    s.skip_ws();
    auto end = scan_number(s);
    if (!end) return std::nullopt;
    s.skip_ws();
    if (!s.consume(']')) return std::nullopt;
    return Moment{*start, *end};
}

// Full strict parse; on failure returns nullopt and reports the byte offset
// where parsing stopped.
std::optional<std::vector<Moment>> parse_strict(std::string_view text, std::size_t* fail_at) {
    Scanner s{text};
    auto fail = [&]() {
        if (fail_at) *fail_at = s.pos;
        return std::nullopt;
    };
    s.skip_ws();
    if (!s.consume('[')) return fail();
    s.skip_ws();
    std::vector<Moment> moments;
    if (s.consume(']')) {
        s.skip_ws();
        if (!s.eof()) return fail();
        return moments;  // the empty list "[]"
    }
    while (true) {
        auto m = scan_pair(s);
        if (!m) return fail();
        moments.push_back(*m);
        s.skip_ws();
        if (s.consume(',')) {
            s.skip_ws();
            continue;
        }
        break;
    }
    if (!s.consume(']')) return fail();
    s.skip_ws();
    if (!s.eof()) return fail();
    return moments;
}

// Every decimal literal in the text, in order of appearance.
std::vector<double> extract_numbers(std::string_view text) {
    std::vector<double> values;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        // A '-' directly after a digit is a range dash ("52-88"), not a sign.
        const bool sign_ok = c == '-' && (i == 0 || !std::isdigit(static_cast<unsigned char>(text[i - 1])));
        const bool starts_number =
            std::isdigit(static_cast<unsigned char>(c)) ||
            (sign_ok && i + 1 < text.size() &&
             (std::isdigit(static_cast<unsigned char>(text[i + 1])) || text[i + 1] == '.')) ||
            (c == '.' && i + 1 < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[i + 1])));
        if (!starts_number) {
            ++i;
            continue;
        }
        Scanner s{text, i};
        if (auto v = scan_number(s)) {
            values.push_back(*v);
            i = s.pos;
        } else {
            ++i;
        }
    }
    return values;
}

void add_tag(std::vector<std::string>& tags, const char* tag) {
    if (std::find(tags.begin(), tags.end(), tag) == tags.end()) tags.emplace_back(tag);
}

}  // namespace

MomentList normalize_moments(MomentList list, double duration_s) {
    bool swapped = false;
    bool clamped = false;
    for (Moment& m : list.moments) {
        if (m.start_s > m.end_s) {
            std::swap(m.start_s, m.end_s);
            swapped = true;
        }
        const Moment before = m;
        m.start_s = std::max(0.0, m.start_s);
        m.end_s = std::max(0.0, m.end_s);
        if (duration_s > 0.0) {
            m.start_s = std::min(m.start_s, duration_s);
            m.end_s = std::min(m.end_s, duration_s);
        }
        if (!(m == before)) clamped = true;
    }
    if (swapped) add_tag(list.repairs_applied, repair::swap_start_end);
    if (clamped) add_tag(list.repairs_applied, repair::clamp);

    // Exact-duplicate removal, preserving first occurrence order.
    std::vector<Moment> unique;
    unique.reserve(list.moments.size());
    for (const Moment& m : list.moments) {
        if (std::find(unique.begin(), unique.end(), m) == unique.end()) unique.push_back(m);
    }
    if (unique.size() != list.moments.size()) {
        list.moments = std::move(unique);
        add_tag(list.repairs_applied, repair::dedup);
    }

    if (!std::is_sorted(list.moments.begin(), list.moments.end(),
                        [](const Moment& a, const Moment& b) {
                            return a.start_s != b.start_s ? a.start_s < b.start_s
                                                          : a.end_s < b.end_s;
                        })) {
        std::sort(list.moments.begin(), list.moments.end(),
                  [](const Moment& a, const Moment& b) {
                      return a.start_s != b.start_s ? a.start_s < b.start_s : a.end_s < b.end_s;
                  });
        add_tag(list.repairs_applied, repair::sort);
    }
    return list;
}

MomentList parse_moments(std::string_view text, double duration_s, bool strict) {
    std::size_t fail_at = 0;
    if (auto moments = parse_strict(text, &fail_at)) {
        MomentList list{std::move(*moments), {}};
        return strict ? list : normalize_moments(std::move(list), duration_s);
    }
    if (strict) {
        throw Error(ErrorCode::ParseError,
                    "input does not match the moment-list grammar (offset " +
                        std::to_string(fail_at) + ")");
    }

    MomentList list;

    // Structural repairs, cheapest first.
    // 1. Balance missing closing brackets at the end of the input.
    const std::int64_t deficit =
        std::count(text.begin(), text.end(), '[') - std::count(text.begin(), text.end(), ']');
    if (deficit > 0) {
        std::string balanced(text);
        balanced.append(static_cast<std::size_t>(deficit), ']');
        if (auto moments = parse_strict(balanced, nullptr)) {
            list.moments = std::move(*moments);
            add_tag(list.repairs_applied, repair::append_brackets);
            return normalize_moments(std::move(list), duration_s);
        }
    }
    // 2. Drop a trailing fragment after the last ']' (an unfinished pair like
    //    ", [12" or a dangling comma), then re-balance.
    const std::size_t last_close = text.rfind(']');
    if (last_close != std::string_view::npos && last_close + 1 < text.size()) {
        std::string truncated(text.substr(0, last_close + 1));
        const std::int64_t inner_deficit = std::count(truncated.begin(), truncated.end(), '[') -
                                           std::count(truncated.begin(), truncated.end(), ']');
        const bool rebalanced = inner_deficit > 0;
        if (rebalanced) truncated.append(static_cast<std::size_t>(inner_deficit), ']');
        if (auto moments = parse_strict(truncated, nullptr)) {
            list.moments = std::move(*moments);
            // Tags in canonical rule order.
            if (rebalanced) add_tag(list.repairs_applied, repair::append_brackets);
            add_tag(list.repairs_applied, repair::drop_incomplete_pair);
            return normalize_moments(std::move(list), duration_s);
        }
    }
    // 3. Last resort: scrape every numeric literal and re-pair.
    std::vector<double> values = extract_numbers(text);
    if (values.size() < 2) {
        throw Error(ErrorCode::Unrecoverable,
                    "found " + std::to_string(values.size()) +
                        " numeric values; need at least one [start, end] pair");
    }
    add_tag(list.repairs_applied, repair::extract_numbers);
    if (values.size() % 2 != 0) {
        values.pop_back();
        add_tag(list.repairs_applied, repair::drop_incomplete_pair);
    }
    for (std::size_t i = 0; i + 1 < values.size(); i += 2) {
        list.moments.push_back(Moment{values[i], values[i + 1]});
    }
    // Keep the canonical rule order in the tag list.
    std::sort(list.repairs_applied.begin(), list.repairs_applied.end(),
              [](const std::string& a, const std::string& b) {
                  auto rank = [](const std::string& t) {
                      if (t == repair::extract_numbers) return 0;
                      if (t == repair::append_brackets) return 1;
                      if (t == repair::drop_incomplete_pair) return 2;
                      return 3;
                  };
                  return rank(a) < rank(b);
              });
    return normalize_moments(std::move(list), duration_s);
}

std::string render_moments(const std::vector<Moment>& moments) {
    auto render_value = [](double v) -> std::string {
        char buf[512];
        if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 1e15) {
            std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v));
            return buf;
        }
        // Shortest exponent-free form that round-trips the double (the
        // moment grammar has no exponents).
        for (int prec = 1; prec <= 17; ++prec) {
            std::snprintf(buf, sizeof buf, "%.*g", prec, v);
            if (std::string_view(buf).find('e') != std::string_view::npos) continue;
            if (std::strtod(buf, nullptr) == v) return buf;
        }
        std::snprintf(buf, sizeof buf, "%.17f", v);
        std::string fixed(buf);
        while (fixed.size() > 1 && fixed.back() == '0') fixed.pop_back();
        if (!fixed.empty() && fixed.back() == '.') fixed.pop_back();
        return fixed;
    };
    if (moments.empty()) return "[]";
    std::string out = "[";
    for (std::size_t i = 0; i < moments.size(); ++i) {
        if (i > 0) out += ", ";
        out += "[" + render_value(moments[i].start_s) + ", " + render_value(moments[i].end_s) + "]";
    }
    out += "]";
    return out;
}

}  // namespace shotkit
