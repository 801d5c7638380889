#pragma once

#include "smdplab/envs.hpp"
#include "smdplab/fhmdp.hpp"
#include "smdplab/options.hpp"

#include <iosfwd>
#include <string>

namespace smdplab {

/// Plain-text model format, version 1. Reals print as %.17g so documents
/// round-trip bit-exactly. Layout:
///
///   smdplab-model 1
///   mdp S A H start
///   transition s a h s' prob        (one line per positive entry)
///   reward s a h mean kind          (kind: det | bern; zero det omitted)
///   option <id>
///   init s h
///   term s h prob                   (positive entries; horizon column implied 1)
///   act s h a
///   end
void save_model(std::ostream& out, const FhMdp& mdp, const OptionSet& options);
Environment load_model(std::istream& in);

void save_model_file(const std::string& path, const FhMdp& mdp, const OptionSet& options);
Environment load_model_file(const std::string& path);

}  // namespace smdplab
