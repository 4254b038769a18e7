#include "bmc/palm_structure.hpp"

namespace bmc {

PalmDescriptor palm_descriptor(const BoneSet& bones) {
  return compute_palm(bones.bones);
}

double root_bone_loss(const PalmDescriptor& palm, const PalmLimits& limits) {
  return root_bone_loss_t(palm, limits);
}

}  // namespace bmc
