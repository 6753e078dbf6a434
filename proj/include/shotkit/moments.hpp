#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "shotkit/errors.hpp"

namespace shotkit {

// One temporal segment, in seconds.
struct Moment {
    double start_s = 0.0;
    double end_s = 0.0;

    double length() const { return end_s - start_s; }
    bool operator==(const Moment&) const = default;
};

// Parsed moments plus the names of every repair rule that changed something,
// in canonical rule order (see parse_moments).
struct MomentList {
    std::vector<Moment> moments;
    std::vector<std::string> repairs_applied;

    bool operator==(const MomentList&) const = default;
};

// Canonical repair tag strings, in pipeline order.
namespace repair {
inline constexpr const char* extract_numbers = "extract-numbers";
inline constexpr const char* append_brackets = "append-brackets";
inline constexpr const char* drop_incomplete_pair = "drop-incomplete-pair";
inline constexpr const char* swap_start_end = "swap-start-end";
inline constexpr const char* clamp = "clamp";
inline constexpr const char* dedup = "dedup";
inline constexpr const char* sort = "sort";
}  // namespace repair

// Parses model output of the form "[[s1, e1], [s2, e2], ...]" or "[]".
//
// strict mode accepts exactly that grammar (plain decimal numbers, optional
// leading '-', no exponents) and returns the values untouched; anything else
// raises ParseError with the offending byte offset in the message.
//
// repair mode tries the strict grammar first and then, in fixed order:
//   append-brackets       balance missing ']' at end of input
//   drop-incomplete-pair  discard a trailing fragment after the last ']'
//                         (or a trailing odd number after extraction)
//   extract-numbers       scrape all decimal literals and re-pair them
// followed by normalization (swap-start-end, clamp to [0, duration],
// dedup, sort).  Tags are recorded only for rules that changed something.
// Raises Unrecoverable when fewer than two numbers can be found and the
// input is not literally the empty list.
MomentList parse_moments(std::string_view text, double duration_s, bool strict = false);

// Normalization alone: per-moment swap then clamp, then dedup of exact
// duplicates, then sort by (start, end).  Appends tags for rules that
// changed something.  duration_s <= 0 disables the upper clamp.
MomentList normalize_moments(MomentList list, double duration_s);

// Renders "[[52, 88], [90, 98]]" / "[]"; integral values print without a
// decimal point, so render/parse round-trips normalized lists exactly.
std::string render_moments(const std::vector<Moment>& moments);

}  // namespace shotkit
