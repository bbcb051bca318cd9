#include "evsim/detector.hpp"

#include <cmath>

namespace evsim {

DetectorArray::DetectorArray(double extent_lo, double extent_hi, std::size_t count, double gamma)
    : lo_(extent_lo), hi_(extent_hi) {
    if (!(extent_hi > extent_lo)) throw std::invalid_argument("detector array: empty extent");
    if (count < 2) throw std::invalid_argument("detector array: need at least two detectors");
    if (!(gamma > 0.0) || !(gamma < 1.0))
        throw std::invalid_argument("detector array: gamma must lie in (0,1)");
    width_ = (hi_ - lo_) / static_cast<double>(count);
    detectors_.resize(count);
    for (std::size_t j = 0; j < count; ++j) {
        detectors_[j].gamma = gamma;
        detectors_[j].window_lo = lo_ + static_cast<double>(j) * width_;
        detectors_[j].window_hi = lo_ + static_cast<double>(j + 1) * width_;
    }
}

std::size_t DetectorArray::locate(double coordinate) const {
    if (!(coordinate >= lo_) || !(coordinate < hi_)) return npos;
    auto j = static_cast<std::size_t>((coordinate - lo_) / width_);
    if (j >= detectors_.size()) j = detectors_.size() - 1;  // guard fp edge at hi_
    // The division can disagree with the half-open window bounds by one ulp;
    // snap to the window that actually contains the coordinate.
    if (coordinate < detectors_[j].window_lo && j > 0) --j;
    else if (coordinate >= detectors_[j].window_hi && j + 1 < detectors_.size()) ++j;
    return j;
}

DetectorArray::Receipt DetectorArray::receive(double coordinate, Vec2 e, double r) {
    Receipt rec;
    const std::size_t j = locate(coordinate);
    if (j == npos) return rec;
    rec.on_screen = true;
    rec.detector = j;
    detectors_[j].update(e);
    rec.fired = detectors_[j].fire(r);
    return rec;
}

}  // namespace evsim
