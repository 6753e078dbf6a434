#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "shotkit/audio.hpp"
#include "shotkit/compress.hpp"
#include "shotkit/types.hpp"

namespace shotkit {

// How multimodal elements are ordered in the prompt sequence.
enum class Strategy { overall, interleaved, dual_stream };

const char* strategy_name(Strategy strategy);
Strategy strategy_from_name(const std::string& name);

// Textual form of time markers: whole seconds (round half up) or fixed two
// decimals.
enum class TimeStyle { int_seconds, two_decimals };

const char* time_style_name(TimeStyle style);
TimeStyle time_style_from_name(const std::string& name);

// Quantizes a timestamp to the representable grid of the style.  Rejects
// negative input.
double quantize_time(double seconds, TimeStyle style);

// Renders an already-quantized (or raw) timestamp: "12" / "12.50".
std::string format_time_token(double seconds, TimeStyle style);

// --- sequence elements -----------------------------------------------------

struct TimeElem {
    double seconds = 0.0;  // already quantized
    bool operator==(const TimeElem&) const = default;
};
struct VisualElem {
    int frame = 0;
    int position = 0;
    bool operator==(const VisualElem&) const = default;
};
struct AudioElem {
    StreamKind stream = StreamKind::mixed;
    std::int64_t index = 0;
    bool operator==(const AudioElem&) const = default;
};
struct VisualEndElem {
    bool operator==(const VisualEndElem&) const = default;
};
struct AudioEndElem {
    bool operator==(const AudioEndElem&) const = default;
};
struct QueryElem {
    std::string text;
    bool operator==(const QueryElem&) const = default;
};
struct PromptElem {
    std::string text;
    bool operator==(const PromptElem&) const = default;
};

using SequenceElement = std::variant<TimeElem, VisualElem, AudioElem, VisualEndElem,
                                     AudioEndElem, QueryElem, PromptElem>;

struct SequenceStats {
    std::int64_t n_time = 0;
    std::int64_t n_visual = 0;
    std::int64_t n_audio = 0;
    std::int64_t total_len = 0;

    bool operator==(const SequenceStats&) const = default;
};

struct PromptSequence {
    std::vector<SequenceElement> elements;
    Strategy strategy = Strategy::overall;
    TimeStyle time_style = TimeStyle::int_seconds;
    SequenceStats stats;
};

// Element-stream equality; strategy/time_style tags are assembly metadata
// and are not part of the wire format.
bool same_elements(const PromptSequence& a, const PromptSequence& b);

// Checks the structural laws of a prompt sequence (one visual-end marker,
// one audio-end marker after it, query then prompt last, every time marker
// immediately followed by visuals of a single frame, frame groups in
// ascending frame order, stats consistent).  Returns a description of the
// first violation, or nullopt.
std::optional<std::string> check_sequence(const PromptSequence& sequence);

// --- assembly ----------------------------------------------------------------

struct AssembleConfig {
    Strategy strategy = Strategy::overall;
    TimeStyle time_style = TimeStyle::int_seconds;
};

// Builds the prompt sequence for one query:
//   time/visual groups (one per frame that kept tokens, ascending), the
//   visual-end marker, pooled audio, the audio-end marker, query, prompt.
// overall     - all audio after the visual-end marker.
// interleaved - audio split over the kept frames: with F frame groups, group
//               i is followed by pooled bins [floor(i*S_a/F), floor((i+1)*S_a/F)).
// dual_stream - use the assemble_dual overload.
// Rejects empty visual selections, empty query text, and embedded newlines
// in query/prompt (the wire format is line-oriented).
PromptSequence assemble(const CompressedVisual& visual, const PooledAudio& audio,
                        const VideoFeatures& video, const std::string& query,
                        const std::string& prompt, const AssembleConfig& config = {});

// dual_stream layout: voice tokens then ambient tokens between the two end
// markers.  config.strategy must be dual_stream.
PromptSequence assemble_dual(const CompressedVisual& visual, const PooledAudio& voice,
                             const PooledAudio& ambient, const VideoFeatures& video,
                             const std::string& query, const std::string& prompt,
                             const AssembleConfig& config);

// --- wire format -------------------------------------------------------------

// One element per line:
//   TIME <t>            (per the sequence's time style)
//   VIS <frame> <position>
//   AUD <stream> <index>
//   SEP V_E
//   SEP A_E
//   QUERY <text>
//   PROMPT <text>
std::string serialize_sequence(const PromptSequence& sequence);

// Inverse of serialize_sequence over the element stream.  The strategy tag
// is not serialized, so the result carries default assembly metadata; stats
// are recomputed.  Malformed lines raise ParseError naming the line number.
PromptSequence parse_sequence(const std::string& text);

}  // namespace shotkit
