#include "shotkit/sequence.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace shotkit {

const char* strategy_name(Strategy strategy) {
    switch (strategy) {
        case Strategy::overall: return "overall";
        case Strategy::interleaved: return "interleaved";
        case Strategy::dual_stream: return "dual_stream";
    }
    return "overall";
}

Strategy strategy_from_name(const std::string& name) {
    if (name == "overall") return Strategy::overall;
    if (name == "interleaved") return Strategy::interleaved;
    if (name == "dual_stream") return Strategy::dual_stream;
    throw Error(ErrorCode::BadConfig, "unknown strategy '" + name + "'");
}

const char* time_style_name(TimeStyle style) {
    return style == TimeStyle::int_seconds ? "int_seconds" : "two_decimals";
}

TimeStyle time_style_from_name(const std::string& name) {
    if (name == "int_seconds") return TimeStyle::int_seconds;
    if (name == "two_decimals") return TimeStyle::two_decimals;
    throw Error(ErrorCode::BadConfig, "unknown time style '" + name + "'");
}

double quantize_time(double seconds, TimeStyle style) {
    if (!(seconds >= 0.0) || !std::isfinite(seconds)) {
        throw Error(ErrorCode::NegativeTime, "time tokens require finite seconds >= 0");
    }
    // Round half up on the style's grid.
    if (style == TimeStyle::int_seconds) return std::floor(seconds + 0.5);
    return std::floor(seconds * 100.0 + 0.5) / 100.0;
}

std::string format_time_token(double seconds, TimeStyle style) {
    const double q = quantize_time(seconds, style);
    char buf[32];
    if (style == TimeStyle::int_seconds) {
        std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(q));
    } else {
        std::snprintf(buf, sizeof buf, "%.2f", q);
    }
    return buf;
}

bool same_elements(const PromptSequence& a, const PromptSequence& b) {
    return a.elements == b.elements;
}

namespace {

SequenceStats compute_stats(const std::vector<SequenceElement>& elements) {
    SequenceStats stats;
    stats.total_len = static_cast<std::int64_t>(elements.size());
    for (const SequenceElement& e : elements) {
        if (std::holds_alternative<TimeElem>(e)) ++stats.n_time;
        else if (std::holds_alternative<VisualElem>(e)) ++stats.n_visual;
        else if (std::holds_alternative<AudioElem>(e)) ++stats.n_audio;
    }
    return stats;
}

void require_line_safe(const std::string& text, const char* what) {
    if (text.find('\n') != std::string::npos || text.find('\r') != std::string::npos) {
        throw Error(ErrorCode::InvalidText,
                    std::string(what) + " must not contain newline characters");
    }
}

// Frames that kept at least one token, ascending, with their token ranges
// inside the lexicographically ordered provenance list.
struct FrameGroup {
    int frame;
    std::size_t begin;  // token range [begin, end) in provenance order
    std::size_t end;
};

std::vector<FrameGroup> frame_groups(const CompressedVisual& visual) {
    std::vector<FrameGroup> groups;
    const auto& tokens = visual.selection.provenance;
    std::size_t i = 0;
    while (i < tokens.size()) {
        std::size_t j = i;
        while (j < tokens.size() && tokens[j].first == tokens[i].first) ++j;
        groups.push_back({tokens[i].first, i, j});
        i = j;
    }
    return groups;
}

void append_audio(std::vector<SequenceElement>& elements, const PooledAudio& audio,
                  std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
        elements.push_back(AudioElem{audio.stream_kind, i});
    }
}

PromptSequence assemble_impl(const CompressedVisual& visual,
                             const PooledAudio* audio_single, const PooledAudio* voice,
                             const PooledAudio* ambient, const VideoFeatures& video,
                             const std::string& query, const std::string& prompt,
                             const AssembleConfig& config) {
    if (visual.selection.retained_count() == 0) {
        throw Error(ErrorCode::EmptyVisual, "no visual tokens survived compression");
    }
    if (query.empty()) throw Error(ErrorCode::EmptyQuery, "query text is empty");
    require_line_safe(query, "query");
    require_line_safe(prompt, "prompt");
    if (video.n_frames() != visual.selection.n_frames) {
        throw Error(ErrorCode::InconsistentInputs,
                    "compressed selection does not match the video's frame count");
    }

    PromptSequence seq;
    seq.strategy = config.strategy;
    seq.time_style = config.time_style;

    const std::vector<FrameGroup> groups = frame_groups(visual);
    const std::int64_t f_count = static_cast<std::int64_t>(groups.size());
    const std::int64_t s_a = audio_single ? audio_single->tokens.dim(0) : 0;

    for (std::int64_t gi = 0; gi < f_count; ++gi) {
        const FrameGroup& g = groups[static_cast<std::size_t>(gi)];
        const double t = video.frame_timestamps_s[static_cast<std::size_t>(g.frame)];
        seq.elements.push_back(TimeElem{quantize_time(t, config.time_style)});
        for (std::size_t i = g.begin; i < g.end; ++i) {
            const auto& [frame, position] = visual.selection.provenance[i];
            seq.elements.push_back(VisualElem{frame, position});
        }
        if (config.strategy == Strategy::interleaved) {
            // Spread pooled bins over the frame groups the same way pooling
            // spreads tokens over bins.
            append_audio(seq.elements, *audio_single, gi * s_a / f_count,
                         (gi + 1) * s_a / f_count);
        }
    }
    seq.elements.push_back(VisualEndElem{});

    if (config.strategy == Strategy::overall) {
        append_audio(seq.elements, *audio_single, 0, s_a);
    } else if (config.strategy == Strategy::dual_stream) {
        append_audio(seq.elements, *voice, 0, voice->tokens.dim(0));
        append_audio(seq.elements, *ambient, 0, ambient->tokens.dim(0));
    }
    seq.elements.push_back(AudioEndElem{});
    seq.elements.push_back(QueryElem{query});
    seq.elements.push_back(PromptElem{prompt});
    seq.stats = compute_stats(seq.elements);
    return seq;
}

}  // namespace

PromptSequence assemble(const CompressedVisual& visual, const PooledAudio& audio,
                        const VideoFeatures& video, const std::string& query,
                        const std::string& prompt, const AssembleConfig& config) {
    if (config.strategy == Strategy::dual_stream) {
        throw Error(ErrorCode::BadConfig, "dual_stream assembly needs assemble_dual");
    }
    return assemble_impl(visual, &audio, nullptr, nullptr, video, query, prompt, config);
}

PromptSequence assemble_dual(const CompressedVisual& visual, const PooledAudio& voice,
                             const PooledAudio& ambient, const VideoFeatures& video,
                             const std::string& query, const std::string& prompt,
                             const AssembleConfig& config) {
    if (config.strategy != Strategy::dual_stream) {
        throw Error(ErrorCode::BadConfig, "assemble_dual requires the dual_stream strategy");
    }
    if (voice.stream_kind != StreamKind::voice || ambient.stream_kind != StreamKind::ambient) {
        throw Error(ErrorCode::InconsistentInputs,
                    "assemble_dual expects a voice stream and an ambient stream");
    }
    return assemble_impl(visual, nullptr, &voice, &ambient, video, query, prompt, config);
}

std::optional<std::string> check_sequence(const PromptSequence& sequence) {
    const auto& elems = sequence.elements;
    if (elems.size() < 4) return "sequence too short to be well-formed";

    std::int64_t visual_end_at = -1;
    std::int64_t audio_end_at = -1;
    for (std::size_t i = 0; i < elems.size(); ++i) {
        if (std::holds_alternative<VisualEndElem>(elems[i])) {
            if (visual_end_at >= 0) return "more than one visual-end marker";
            visual_end_at = static_cast<std::int64_t>(i);
        } else if (std::holds_alternative<AudioEndElem>(elems[i])) {
            if (audio_end_at >= 0) return "more than one audio-end marker";
            audio_end_at = static_cast<std::int64_t>(i);
        }
    }
    if (visual_end_at < 0) return "missing visual-end marker";
    if (audio_end_at < 0) return "missing audio-end marker";
    if (audio_end_at < visual_end_at) return "audio-end marker precedes visual-end marker";

    if (elems.size() < 2 || !std::holds_alternative<QueryElem>(elems[elems.size() - 2]) ||
        !std::holds_alternative<PromptElem>(elems[elems.size() - 1])) {
        return "sequence must end with query then prompt";
    }
    if (static_cast<std::size_t>(audio_end_at) != elems.size() - 3) {
        return "unexpected elements between audio-end marker and query";
    }

    // Before the visual-end marker: time/visual groups (optionally with
    // interleaved audio), ascending frame order, every time marker followed
    // by at least one visual of one frame.
    int last_group_frame = -1;
    std::size_t i = 0;
    while (static_cast<std::int64_t>(i) < visual_end_at) {
        const SequenceElement& e = elems[i];
        if (const TimeElem* te = std::get_if<TimeElem>(&e)) {
            if (te->seconds < 0.0) return "negative time marker";
            if (static_cast<std::int64_t>(i + 1) >= visual_end_at ||
                !std::holds_alternative<VisualElem>(elems[i + 1])) {
                return "time marker not followed by a visual token";
            }
            const int frame = std::get<VisualElem>(elems[i + 1]).frame;
            if (frame <= last_group_frame) return "frame groups not in ascending frame order";
            last_group_frame = frame;
            ++i;
            while (static_cast<std::int64_t>(i) < visual_end_at &&
                   std::holds_alternative<VisualElem>(elems[i])) {
                if (std::get<VisualElem>(elems[i]).frame != frame) {
                    return "visual group mixes frames";
                }
                ++i;
            }
        } else if (std::holds_alternative<AudioElem>(e)) {
            ++i;  // interleaved audio between groups
        } else {
            return "unexpected element before the visual-end marker";
        }
    }
    // Between the markers: audio only.
    for (std::size_t j = static_cast<std::size_t>(visual_end_at) + 1;
         j < static_cast<std::size_t>(audio_end_at); ++j) {
        if (!std::holds_alternative<AudioElem>(elems[j])) {
            return "non-audio element between visual-end and audio-end markers";
        }
    }

    if (sequence.stats != compute_stats(elems)) return "stats do not match the element stream";
    if (std::get<QueryElem>(elems[elems.size() - 2]).text.empty()) return "empty query";
    return std::nullopt;
}

// --- wire format ---------------------------------------------------------------

std::string serialize_sequence(const PromptSequence& sequence) {
    std::ostringstream out;
    const TimeStyle style = sequence.time_style;
    for (const SequenceElement& e : sequence.elements) {
        if (const TimeElem* te = std::get_if<TimeElem>(&e)) {
            out << "TIME " << format_time_token(te->seconds, style) << '\n';
        } else if (const VisualElem* ve = std::get_if<VisualElem>(&e)) {
            out << "VIS " << ve->frame << ' ' << ve->position << '\n';
        } else if (const AudioElem* ae = std::get_if<AudioElem>(&e)) {
            out << "AUD " << stream_kind_name(ae->stream) << ' ' << ae->index << '\n';
        } else if (std::holds_alternative<VisualEndElem>(e)) {
            out << "SEP V_E\n";
        } else if (std::holds_alternative<AudioEndElem>(e)) {
            out << "SEP A_E\n";
        } else if (const QueryElem* qe = std::get_if<QueryElem>(&e)) {
            out << "QUERY " << qe->text << '\n';
        } else if (const PromptElem* pe = std::get_if<PromptElem>(&e)) {
            out << "PROMPT " << pe->text << '\n';
        }
    }
    return out.str();
}

namespace {

[[noreturn]] void bad_line(std::int64_t line_no, const std::string& line) {
    throw Error(ErrorCode::ParseError,
                "bad sequence line " + std::to_string(line_no) + ": '" + line + "'");
}

}  // namespace

PromptSequence parse_sequence(const std::string& text) {
    PromptSequence seq;
    std::istringstream in(text);
    std::string line;
    std::int64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::size_t sp = line.find(' ');
        const std::string tag = line.substr(0, sp);
        const std::string rest = sp == std::string::npos ? "" : line.substr(sp + 1);
        if (tag == "TIME") {
            double seconds;
            const char* begin = rest.data();
            const char* end = rest.data() + rest.size();
            auto [ptr, ec] = std::from_chars(begin, end, seconds);
            if (ec != std::errc{} || ptr != end || seconds < 0.0) bad_line(line_no, line);
            seq.elements.push_back(TimeElem{seconds});
        } else if (tag == "VIS") {
            int frame, position, consumed = -1;
            if (std::sscanf(rest.c_str(), "%d %d%n", &frame, &position, &consumed) != 2 ||
                consumed != static_cast<int>(rest.size()) || frame < 0 || position < 0) {
                bad_line(line_no, line);
            }
            seq.elements.push_back(VisualElem{frame, position});
        } else if (tag == "AUD") {
            char kind[16];
            long long index;
            int consumed = -1;
            if (std::sscanf(rest.c_str(), "%15s %lld%n", kind, &index, &consumed) != 2 ||
                consumed != static_cast<int>(rest.size()) || index < 0) {
                bad_line(line_no, line);
            }
            try {
                seq.elements.push_back(AudioElem{stream_kind_from_name(kind), index});
            } catch (const Error&) {
                bad_line(line_no, line);
            }
        } else if (tag == "SEP") {
            if (rest == "V_E") seq.elements.push_back(VisualEndElem{});
            else if (rest == "A_E") seq.elements.push_back(AudioEndElem{});
            else bad_line(line_no, line);
        } else if (tag == "QUERY") {
            seq.elements.push_back(QueryElem{rest});
        } else if (tag == "PROMPT") {
            seq.elements.push_back(PromptElem{rest});
        } else {
            bad_line(line_no, line);
        }
    }
    seq.stats = compute_stats(seq.elements);
    return seq;
}

}  // namespace shotkit
