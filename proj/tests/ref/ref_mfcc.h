// ref/ref_mfcc.h
//
// Naive DCT-of-log-mel oracle: direct DFT per frame, no FFT, filter and
// DCT sums written straight from their definitions.

#ifndef SEA_REF_REF_MFCC_H_
#define SEA_REF_REF_MFCC_H_

#include <vector>

#include "sea/features.h"

namespace sea {
namespace ref {

MatF mfcc_serial(const std::vector<float>& samples, int sample_rate,
                 const MfccConfig& cfg);

}  // namespace ref
}  // namespace sea

#endif  // SEA_REF_REF_MFCC_H_
