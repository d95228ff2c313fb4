#pragma once

#include <memory>
#include <string>

#include "funcmark/field.hpp"

namespace funcmark {

// Analytic shape from a spec string:
//   sphere[:cx,cy,cz,r]        default 0,0,0,0.5
//   torus[:cx,cy,cz,R,r]       default 0,0,0,0.5,0.2
//   blend                      asymmetric sphere/torus smooth union
// The blend shape breaks all rotational symmetry, which alignment needs.
std::shared_ptr<const ScalarField> make_shape(const std::string& spec);

}  // namespace funcmark
