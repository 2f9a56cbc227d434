#ifndef ALLOTAX_RENDER_HPP
#define ALLOTAX_RENDER_HPP

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "allotax/divergence.hpp"
#include "allotax/plotgeom.hpp"
#include "allotax/ranking.hpp"

namespace allotax {

struct DocumentOptions {
    int cells = kDefaultCells;
    std::size_t wordshift_n = kDefaultWordshiftLength;
    std::size_t max_labels = kDefaultLabelsPerSide;
    int contour_levels = kDefaultContourLevels;
    unsigned threads = 1;
};

/// Everything needed to draw one allotaxonograph.
struct AllotaxDocument {
    std::string title_1;
    std::string title_2;
    Alpha alpha = Alpha::zero();
    DiamondGrid grid;
    std::vector<WordshiftEntry> wordshift;
    BalanceStats balance;
    double divergence = 0;
    double normalization = 0;
    std::size_t union_size = 0;
};

AllotaxDocument assemble(const MergedLexicon& lex, Alpha alpha, std::string title_1, std::string title_2,
                         const DocumentOptions& options = {});

/// Standalone SVG 1.1. Pure: equal documents give byte-identical output.
std::string render_svg(const AllotaxDocument& doc);

/// {alpha, divergence, normalization, balance, wordshift} with 12 significant digits.
nlohmann::ordered_json report_json(const AllotaxDocument& doc);
std::string render_report(const AllotaxDocument& doc);

/// Rough width of `text` in pixels from a fixed per-character table.
double estimate_text_width(std::string_view text, double font_size);

/// Value rounded to 12 significant digits; integral values come back as integers.
nlohmann::ordered_json report_number(double value);

}  // namespace allotax

#endif
