#ifndef ROADFIELD_GEOMETRY_PLOT_HPP
#define ROADFIELD_GEOMETRY_PLOT_HPP

#include <string>

#include "roadfield/model.hpp"

namespace roadfield {

/// Self-contained SVG of the dispersion geometry at speed c: the slab
/// boundary curves, the disc boundary circle, and the intersection region
/// (shaded, id="overlap") when it is nonempty.  A marker (id="contact") is
/// placed at the minimum-gap point when the sets touch to within 1e-6.
/// Requires c >= c_K.
std::string plot_geometry(const ModelParams& p, const FieldReaction& f, const RoadReaction& g,
                          double c);

}  // namespace roadfield

#endif
