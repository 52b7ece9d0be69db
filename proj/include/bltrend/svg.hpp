#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bltrend::svg {

/// Fixed two-decimal coordinate formatting, independent of locale.
std::string num(double value);
std::string escape(std::string_view text);

/// Minimal SVG emitter. Elements are written in call order, so output is a
/// pure function of the calls made.
class Document {
public:
    Document(double width, double height);

    void rect(double x, double y, double w, double h, std::string_view fill, std::string_view stroke = "none");
    void line(double x1, double y1, double x2, double y2, std::string_view stroke, double width = 1.0,
              std::string_view dash = {});
    void polyline(const std::vector<std::pair<double, double>>& points, std::string_view stroke, double width = 2.0);
    void circle(double cx, double cy, double r, std::string_view fill);
    void text(double x, double y, std::string_view content, std::string_view anchor = "start", double size = 12.0,
              double rotate = 0.0);

    std::string str() const;

private:
    double width_;
    double height_;
    std::string body_;
};

/// Maps a data interval onto a pixel interval.
struct LinearScale {
    double d0, d1, r0, r1;
    double operator()(double v) const { return d1 == d0 ? r0 : r0 + (v - d0) * (r1 - r0) / (d1 - d0); }
};

/// Round tick values covering [lo, hi], roughly `target` of them.
std::vector<double> nice_ticks(double lo, double hi, int target = 5);

/// Fixed categorical palette.
std::string_view palette(std::size_t index);

}  // namespace bltrend::svg
