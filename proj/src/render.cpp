#include "allotax/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include <fmt/format.h>

namespace allotax {

AllotaxDocument assemble(const MergedLexicon& lex, Alpha alpha, std::string title_1, std::string title_2,
                         const DocumentOptions& options) {
    AllotaxDocument doc;
    doc.title_1 = std::move(title_1);
    doc.title_2 = std::move(title_2);
    doc.alpha = alpha;

    const DivergenceResult result = rtd_total(lex, alpha, options.threads);
    doc.divergence = result.total;
    doc.normalization = result.normalization;
    doc.union_size = lex.size();

    doc.grid = build_diamond(lex, options.cells);
    doc.grid.labels = select_labels(doc.grid, options.max_labels);
    doc.grid.contours = contour_lines(alpha, doc.grid.log_rank_max, options.contour_levels);
    doc.wordshift = wordshift(result, lex, options.wordshift_n);
    doc.balance = balance(lex);
    return doc;
}

// ---------------------------------------------------------------------------
// Report

nlohmann::ordered_json report_number(double value) {
    if (!std::isfinite(value)) return nullptr;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    const double rounded = std::strtod(buf, nullptr);
    if (rounded == std::floor(rounded) && std::fabs(rounded) < 9007199254740992.0) {
        return static_cast<std::int64_t>(rounded);
    }
    return rounded;
}

nlohmann::ordered_json report_json(const AllotaxDocument& doc) {
    using oj = nlohmann::ordered_json;
    oj out = oj::object();
    if (doc.alpha.kind() == Alpha::Kind::infinity) {
        out["alpha"] = "inf";
    } else {
        out["alpha"] = report_number(doc.alpha.value());
    }
    out["divergence"] = report_number(doc.divergence);
    out["normalization"] = report_number(doc.normalization);
    const auto pair = [](const std::array<double, 2>& v) {
        return oj::array({report_number(v[0]), report_number(v[1])});
    };
    out["balance"] = oj::object();
    out["balance"]["count_share"] = pair(doc.balance.count_share);
    out["balance"]["type_share"] = pair(doc.balance.type_share);
    out["balance"]["exclusive_share"] = pair(doc.balance.exclusive_share);
    oj shift = oj::array();
    for (const auto& e : doc.wordshift) {
        oj item = oj::object();
        item["label"] = e.label;
        item["element"] = report_number(e.element);
        item["share"] = report_number(e.normalized_share);
        item["rank_1"] = report_number(e.rank_1);
        item["rank_2"] = report_number(e.rank_2);
        item["side"] = std::string(side_name(e.side));
        shift.push_back(std::move(item));
    }
    out["wordshift"] = std::move(shift);
    return out;
}

std::string render_report(const AllotaxDocument& doc) {
    return report_json(doc).dump(2, ' ', false, nlohmann::ordered_json::error_handler_t::replace) + "\n";
}

// ---------------------------------------------------------------------------
// SVG

namespace {

// Colour ramps, light to dark. System 1 is blue, system 2 orange, ties grey.
struct Rgb {
    double r, g, b;
};
constexpr std::array<Rgb, 2> kRamp1{{{222, 235, 247}, {8, 48, 107}}};
constexpr std::array<Rgb, 2> kRamp2{{{254, 230, 206}, {127, 39, 4}}};
constexpr std::array<Rgb, 2> kRampTie{{{240, 240, 240}, {37, 37, 37}}};
constexpr const char* kInk1 = "#2171b5";
constexpr const char* kInk2 = "#d94801";
constexpr const char* kFont = "sans-serif";

constexpr double kWidth = 1200;
constexpr double kHeight = 800;

// Diamond: grid square of side kSide drawn rotated 45 degrees around its
// rank-1 corner, which sits at (kDiamondX, kDiamondY).
constexpr double kSide = 360;
constexpr double kDiamondX = 330;
constexpr double kDiamondY = 100;

constexpr double kShiftLeft = 700;
constexpr double kShiftRight = 1170;
constexpr double kShiftTop = 120;
constexpr double kShiftBottom = 760;

std::string color(const std::array<Rgb, 2>& ramp, double t) {
    t = std::clamp(t, 0.0, 1.0);
    const auto mix = [&](double a, double b) { return static_cast<int>(std::lround(a + (b - a) * t)); };
    return fmt::format("#{:02x}{:02x}{:02x}", mix(ramp[0].r, ramp[1].r), mix(ramp[0].g, ramp[1].g),
                       mix(ramp[0].b, ramp[1].b));
}

std::string num(double v) {
    std::string s = fmt::format("{:.2f}", v);
    if (s == "-0.00") s = "0.00";
    return s;
}

// Decodes one UTF-8 sequence at s[pos]; returns its length, or 0 if invalid.
std::size_t utf8_length(std::string_view s, std::size_t pos, char32_t& cp) {
    const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(s[i]); };
    const unsigned char c = byte(pos);
    std::size_t len;
    if (c < 0x80) {
        cp = c;
        return 1;
    } else if ((c & 0xE0) == 0xC0) {
        len = 2;
        cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
        len = 3;
        cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
        len = 4;
        cp = c & 0x07;
    } else {
        return 0;
    }
    if (pos + len > s.size()) return 0;
    for (std::size_t i = 1; i < len; ++i) {
        if ((byte(pos + i) & 0xC0) != 0x80) return 0;
        cp = (cp << 6) | (byte(pos + i) & 0x3F);
    }
    static constexpr char32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return 0;
    return len;
}

// XML-escaped text; invalid UTF-8 and characters XML 1.0 forbids become U+FFFD.
std::string xml(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t pos = 0;
    while (pos < s.size()) {
        char32_t cp = 0;
        const std::size_t len = utf8_length(s, pos, cp);
        if (len == 0 || (cp < 0x20 && cp != '\t' && cp != '\n' && cp != '\r') || cp == 0xFFFE || cp == 0xFFFF) {
            out += "\xEF\xBF\xBD";
            pos += len == 0 ? 1 : len;
            continue;
        }
        switch (cp) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out.append(s.substr(pos, len));
        }
        pos += len;
    }
    return out;
}

double char_width(char32_t cp) {
    if (cp >= 0x80) return cp >= 0x1100 ? 1.0 : 0.6;
    switch (cp) {
        case 'i': case 'j': case 'l': case '.': case ',': case ';': case ':': case '\'':
        case '|': case '!': case ' ': case 'I':
            return 0.28;
        case 'f': case 't': case 'r': case '(': case ')': case '[': case ']': case '-':
            return 0.36;
        case 'm': case 'w': case 'M': case 'W':
            return 0.85;
        default: break;
    }
    if (cp >= 'A' && cp <= 'Z') return 0.68;
    return 0.55;
}

// Shortens text with an ellipsis until its estimated width fits.
std::string fit(std::string_view text, double font_size, double max_width) {
    if (estimate_text_width(text, font_size) <= max_width) return std::string(text);
    const double budget = max_width - estimate_text_width("\xE2\x80\xA6", font_size);
    double used = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        char32_t cp = 0;
        std::size_t len = utf8_length(text, pos, cp);
        if (len == 0) {
            len = 1;
            cp = 0xFFFD;
        }
        const double w = char_width(cp) * font_size;
        if (used + w > budget) break;
        used += w;
        pos += len;
    }
    return std::string(text.substr(0, pos)) + "\xE2\x80\xA6";
}

std::string format_rank(double rank) {
    if (rank == std::floor(rank) && rank < 1e15) return fmt::format("{:.0f}", rank);
    std::string s = fmt::format("{:.2f}", rank);
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
    return s;
}

std::string power_of_ten(int m) {
    static constexpr const char* kSup[] = {"\xE2\x81\xB0", "\xC2\xB9", "\xC2\xB2", "\xC2\xB3",
                                           "\xE2\x81\xB4", "\xE2\x81\xB5", "\xE2\x81\xB6",
                                           "\xE2\x81\xB7", "\xE2\x81\xB8", "\xE2\x81\xB9"};
    if (m == 0) return "1";
    if (m == 1) return "10";
    std::string digits = std::to_string(m);
    std::string out = "10";
    for (char d : digits) out += kSup[d - '0'];
    return out;
}

std::string percent(double share) { return fmt::format("{:.1f}%", 100.0 * share); }

class SvgWriter {
public:
    void line(std::string_view s) {
        out_.append(s);
        out_.push_back('\n');
    }
    template <class... Args>
    void print(fmt::format_string<Args...> f, Args&&... args) {
        fmt::format_to(std::back_inserter(out_), f, std::forward<Args>(args)...);
        out_.push_back('\n');
    }
    void text(double x, double y, std::string_view content, double size, std::string_view anchor = "start",
              std::string_view fill = "#222222", std::string_view extra = "") {
        print(R"(<text x="{}" y="{}" font-size="{}" text-anchor="{}" fill="{}"{}>{}</text>)", num(x), num(y),
              num(size), anchor, fill, extra, xml(content));
    }
    std::string take() { return std::move(out_); }

private:
    std::string out_;
};

void draw_header(SvgWriter& w, const AllotaxDocument& doc) {
    w.text(40, 40, fit(doc.title_1, 18, 290), 18, "start", kInk1, R"( font-weight="bold" id="title-1")");
    w.text(620, 40, fit(doc.title_2, 18, 290), 18, "end", kInk2, R"( font-weight="bold" id="title-2")");
    const std::string value = fmt::format(" = {:.3f}", doc.divergence);
    const double width = estimate_text_width("D", 15) + estimate_text_width("R", 10) + estimate_text_width(value, 15);
    w.print(R"(<text x="{}" y="68" font-size="15" text-anchor="start" fill="#222222" id="divergence">)"
            R"(D<tspan dy="-6" font-size="10">R</tspan><tspan dx="-6" dy="10" font-size="10">)"
            "\xCE\xB1"
            R"(</tspan><tspan dy="-4">{}</tspan></text>)",
            num(kDiamondX - width / 2), value);
    w.print(R"(<text x="{}" y="88" font-size="13" text-anchor="middle" fill="#444444" id="alpha">)"
            "\xCE\xB1 = {}</text>",
            num(kDiamondX), xml(doc.alpha.kind() == Alpha::Kind::infinity ? "\xE2\x88\x9E" : doc.alpha.display()));
}

void draw_diamond(SvgWriter& w, const AllotaxDocument& doc) {
    const DiamondGrid& g = doc.grid;
    const double s = kSide / g.k;
    std::uint64_t max_count = 1;
    for (const auto& [c, cell] : g.cells) max_count = std::max(max_count, cell.count);
    const double denom = std::log10(1.0 + static_cast<double>(max_count));

    w.print(R"svg(<g id="diamond" transform="translate({},{}) rotate(45)">)svg", num(kDiamondX), num(kDiamondY));
    w.print(R"(<rect x="0" y="0" width="{0}" height="{0}" fill="#ffffff" stroke="#bbbbbb" stroke-width="0.8"/>)",
            num(kSide));
    for (const auto& [c, cell] : g.cells) {
        const double t = std::log10(1.0 + static_cast<double>(cell.count)) / denom;
        const auto& ramp = c.i < c.j ? kRamp1 : c.i > c.j ? kRamp2 : kRampTie;
        w.print(R"(<rect x="{}" y="{}" width="{}" height="{}" fill="{}"><title>{} ({})</title></rect>)",
                num(c.i * s), num(c.j * s), num(s), num(s), color(ramp, 0.15 + 0.85 * t), xml(cell.top_label),
                cell.count);
    }
    w.print(R"(<line x1="0" y1="0" x2="{0}" y2="{0}" stroke="#888888" stroke-width="0.6" stroke-dasharray="3,3"/>)",
            num(kSide));
    const double scale = kSide / g.log_rank_max;
    for (const Polyline& line : g.contours) {
        std::string pts;
        for (std::size_t p = 0; p < line.size(); ++p) {
            if (p) pts.push_back(' ');
            pts += num(line[p].x * scale);
            pts.push_back(',');
            pts += num(line[p].y * scale);
        }
        w.print(R"(<polyline points="{}" fill="none" stroke="#777777" stroke-width="0.5" stroke-opacity="0.8"/>)",
                pts);
    }
    w.line("</g>");

    // Un-rotated screen position of grid coordinates (a, b).
    const double r2 = std::sqrt(2.0);
    const auto screen = [&](double a, double b) {
        return Point{kDiamondX + (a - b) / r2, kDiamondY + (a + b) / r2};
    };

    // Rank ticks: system 1 along the lower-left edge, system 2 along the lower-right.
    w.line(R"(<g id="axes" font-family="sans-serif">)");
    const int decades = static_cast<int>(std::lround(g.log_rank_max));
    for (int m = 0; m <= decades; ++m) {
        const double a = m * scale;
        const Point left = screen(a, kSide);
        const Point right = screen(kSide, a);
        w.text(left.x - 8, left.y + 12, power_of_ten(m), 10, "end", "#555555");
        w.text(right.x + 8, right.y + 12, power_of_ten(m), 10, "start", "#555555");
    }
    const Point mid_left = screen(kSide / 2, kSide);
    const Point mid_right = screen(kSide, kSide / 2);
    w.print(R"svg(<text x="{0}" y="{1}" font-size="12" text-anchor="middle" fill="{2}" transform="rotate(45 {0} {1})">{3}</text>)svg",
            num(mid_left.x - 24), num(mid_left.y + 24), kInk1, xml("Rank r\xE2\x82\x81 \xC2\xB7 " + fit(doc.title_1, 12, 200)));
    w.print(R"svg(<text x="{0}" y="{1}" font-size="12" text-anchor="middle" fill="{2}" transform="rotate(-45 {0} {1})">{3}</text>)svg",
            num(mid_right.x + 24), num(mid_right.y + 24), kInk2, xml("Rank r\xE2\x82\x82 \xC2\xB7 " + fit(doc.title_2, 12, 200)));
    w.line("</g>");

    w.line(R"(<g id="flank-labels" font-family="sans-serif">)");
    struct Box {
        double x0, y0, x1, y1;
    };
    std::vector<Box> placed;
    for (const FlankLabel& label : g.labels) {
        const Point centre = screen((label.cell.i + 0.5) * s, (label.cell.j + 0.5) * s);
        const double offset = s / r2 + 2;
        const std::string text = fit(label.label, 8, 90);
        const double width = estimate_text_width(text, 8);
        const bool left = label.side == Side::system_1;
        const double x = left ? centre.x - offset : centre.x + offset;
        const Box box{left ? x - width : x, centre.y - 5, left ? x : x + width, centre.y + 5};
        const bool clash = std::any_of(placed.begin(), placed.end(), [&](const Box& b) {
            return box.x0 < b.x1 && b.x0 < box.x1 && box.y0 < b.y1 && b.y0 < box.y1;
        });
        if (clash) continue;
        placed.push_back(box);
        w.text(x, centre.y + 3, text, 8, left ? "end" : "start", left ? kInk1 : kInk2);
    }
    w.line("</g>");
}

void draw_legend(SvgWriter& w, const AllotaxDocument& doc) {
    std::uint64_t max_count = 1;
    for (const auto& [c, cell] : doc.grid.cells) max_count = std::max(max_count, cell.count);
    constexpr double x0 = 40, y0 = 660;
    constexpr int steps = 10;
    w.line(R"(<g id="legend" font-family="sans-serif">)");
    w.text(x0, y0 - 8, "Types per cell", 11);
    const std::array<std::pair<const std::array<Rgb, 2>*, const std::string*>, 2> rows{
        {{&kRamp1, &doc.title_1}, {&kRamp2, &doc.title_2}}};
    for (std::size_t row = 0; row < rows.size(); ++row) {
        const double y = y0 + row * 18.0;
        for (int k = 0; k < steps; ++k) {
            const double t = static_cast<double>(k) / (steps - 1);
            w.print(R"(<rect x="{}" y="{}" width="14" height="12" fill="{}"/>)", num(x0 + 14.0 * k), num(y),
                    color(*rows[row].first, 0.15 + 0.85 * t));
        }
        w.text(x0 + 14.0 * steps + 6, y + 10, "higher in " + fit(*rows[row].second, 10, 120), 10);
    }
    w.text(x0, y0 + 48, "1", 9, "start", "#555555");
    w.text(x0 + 14.0 * steps, y0 + 48, std::to_string(max_count), 9, "end", "#555555");
    w.text(x0, y0 + 64, "log scale, log10(1 + count)", 9, "start", "#777777");
    w.line("</g>");
}

void draw_balance(SvgWriter& w, const AllotaxDocument& doc) {
    constexpr double cx = 530, y0 = 650, half = 90, bar = 11;
    w.line(R"(<g id="balance" font-family="sans-serif">)");
    w.text(cx, y0 - 10, "Balance", 11, "middle");
    const std::array<std::pair<const char*, const std::array<double, 2>*>, 3> rows{
        {{"total counts", &doc.balance.count_share},
         {"all types", &doc.balance.type_share},
         {"exclusive types", &doc.balance.exclusive_share}}};
    for (std::size_t row = 0; row < rows.size(); ++row) {
        const double y = y0 + row * 30.0;
        const auto& share = *rows[row].second;
        w.text(cx, y, rows[row].first, 9, "middle", "#555555");
        w.print(R"(<rect x="{}" y="{}" width="{}" height="{}" fill="{}"/>)", num(cx - half * share[0]), num(y + 3),
                num(half * share[0]), num(bar), kInk1);
        w.print(R"(<rect x="{}" y="{}" width="{}" height="{}" fill="{}"/>)", num(cx), num(y + 3),
                num(half * share[1]), num(bar), kInk2);
        w.text(cx - half - 4, y + 12, percent(share[0]), 9, "end");
        w.text(cx + half + 4, y + 12, percent(share[1]), 9, "start");
    }
    w.print(R"(<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="#444444" stroke-width="0.6"/>)", num(cx),
            num(y0 + 2), num(y0 + 76));
    w.line("</g>");
}

void draw_wordshift(SvgWriter& w, const AllotaxDocument& doc) {
    const double axis = (kShiftLeft + kShiftRight) / 2;
    const double half = (kShiftRight - kShiftLeft) / 2;
    w.line(R"(<g id="wordshift" font-family="sans-serif">)");
    w.text(axis, kShiftTop - 40, "Contributions to divergence", 13, "middle");
    w.text(axis - 6, kShiftTop - 20, "\xE2\x86\x90 " + fit(doc.title_1, 11, half - 20), 11, "end", kInk1);
    w.text(axis + 6, kShiftTop - 20, fit(doc.title_2, 11, half - 20) + " \xE2\x86\x92", 11, "start", kInk2);

    if (doc.wordshift.empty()) {
        w.text(axis, kShiftTop + 20, "No rank differences", 11, "middle", "#777777");
        w.line("</g>");
        return;
    }
    const double max_element = doc.wordshift.front().element;
    const double row = std::min(18.0, (kShiftBottom - kShiftTop) / static_cast<double>(doc.wordshift.size()));
    const double font = std::clamp(row * 0.65, 4.0, 10.0);
    for (std::size_t k = 0; k < doc.wordshift.size(); ++k) {
        const WordshiftEntry& e = doc.wordshift[k];
        const double y = kShiftTop + k * row;
        const double length = half * e.element / max_element;
        const bool left = e.side == Side::system_1;
        w.print(R"(<rect x="{}" y="{}" width="{}" height="{}" fill="{}" fill-opacity="0.85"/>)",
                num(left ? axis - length : axis), num(y + row * 0.15), num(length), num(row * 0.7),
                left ? kInk1 : kInk2);
        const std::string annotation = fit(e.label, font, half - 90) + " " + format_rank(e.rank_1) +
                                       " \xE2\x87\x84 " + format_rank(e.rank_2);
        w.text(left ? axis + 4 : axis - 4, y + row * 0.5 + font * 0.35, annotation, font, left ? "start" : "end");
    }
    const double bottom = kShiftTop + doc.wordshift.size() * row;
    w.print(R"(<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="#444444" stroke-width="0.6"/>)", num(axis),
            num(kShiftTop), num(bottom));
    w.print(R"(<line x1="{0}" y1="{2}" x2="{1}" y2="{2}" stroke="#444444" stroke-width="0.6"/>)", num(kShiftLeft),
            num(kShiftRight), num(bottom + 4));
    w.text(kShiftLeft, bottom + 16, fmt::format("{:.3g}", max_element), 9, "start", "#555555");
    w.text(axis, bottom + 16, "0", 9, "middle", "#555555");
    w.text(kShiftRight, bottom + 16, fmt::format("{:.3g}", max_element), 9, "end", "#555555");
    w.text(axis, bottom + 30, "rank-turbulence contribution (before normalization)", 9, "middle", "#777777");
    w.line("</g>");
}

}  // namespace

double estimate_text_width(std::string_view text, double font_size) {
    double width = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        char32_t cp = 0;
        std::size_t len = utf8_length(text, pos, cp);
        if (len == 0) {
            len = 1;
            cp = 0xFFFD;
        }
        width += char_width(cp);
        pos += len;
    }
    return width * font_size;
}

std::string render_svg(const AllotaxDocument& doc) {
    SvgWriter w;
    w.line(R"(<?xml version="1.0" encoding="UTF-8" standalone="yes"?>)");
    w.print(R"(<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{0}" height="{1}" viewBox="0 0 {0} {1}" font-family="{2}">)",
            kWidth, kHeight, kFont);
    w.print("<title>{} vs {}</title>", xml(doc.title_1), xml(doc.title_2));
    w.print(R"(<rect x="0" y="0" width="{}" height="{}" fill="#ffffff"/>)", kWidth, kHeight);
    draw_header(w, doc);
    draw_diamond(w, doc);
    draw_legend(w, doc);
    draw_balance(w, doc);
    draw_wordshift(w, doc);
    w.text(kWidth - 20, kHeight - 12, fmt::format("{} types", doc.union_size), 9, "end", "#777777");
    w.line("</svg>");
    return w.take();
}

}  // namespace allotax
