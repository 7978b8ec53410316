#pragma once
// Small non-validating XML reader for feed and phone-backup files.
// Handles elements, attributes, character data, CDATA, comments, numeric and
// predefined entities. Namespace prefixes are kept in names; matching helpers
// compare local names. Every read is bounds-checked; malformed input throws
// XmlError with a line number.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chronorg/errors.hpp"

namespace chronorg::xml {

struct Element {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<Element> children;
    std::string text; // concatenated direct character data, entity-decoded
    std::size_t line = 0;
};

Element parse(std::string_view text);

// Local-name comparison: "atom:category" matches "category".
bool name_is(const Element& el, std::string_view local);
const Element* find_child(const Element& el, std::string_view local);
std::vector<const Element*> find_children(const Element& el, std::string_view local);
void find_descendants(const Element& el, std::string_view local,
                      std::vector<const Element*>& out);
const std::string* find_attribute(const Element& el, std::string_view name);

} // namespace chronorg::xml
