// ref/ref_edit.h
//
// Plain recursion on the textbook edit-distance definition. Exponential,
// usable only for short sequences; exists purely as a test oracle.

#ifndef SEA_REF_REF_EDIT_H_
#define SEA_REF_REF_EDIT_H_

#include <string>
#include <vector>

namespace sea {
namespace ref {

int edit_distance_recursive(const std::vector<std::string>& a,
                            const std::vector<std::string>& b);

}  // namespace ref
}  // namespace sea

#endif  // SEA_REF_REF_EDIT_H_
