#ifndef ADREPLAY_UTIL_STRINGS_H_
#define ADREPLAY_UTIL_STRINGS_H_

#include <string>
#include <string_view>
#include <vector>

namespace adreplay {

char AsciiToLower(char c);
std::string AsciiLower(std::string_view s);

bool EqualsIgnoreCase(std::string_view a, std::string_view b);
bool StartsWithIgnoreCase(std::string_view s, std::string_view prefix);
bool EndsWithIgnoreCase(std::string_view s, std::string_view suffix);
bool ContainsIgnoreCase(std::string_view haystack, std::string_view needle);

// Finds `needle` in `haystack` starting at `from`, ignoring ASCII case.
// Returns npos when absent.
size_t FindIgnoreCase(std::string_view haystack, std::string_view needle,
                      size_t from = 0);

std::string_view TrimWhitespace(std::string_view s);

// Splits on every occurrence of `sep`; empty pieces are kept.
std::vector<std::string_view> Split(std::string_view s, char sep);

bool IsAsciiDigit(char c);
bool IsAllDigits(std::string_view s);
bool IsLowerHex(std::string_view s);

// Glob match where '*' matches any run (including empty) and '?' matches one
// character. Comparison ignores ASCII case.
bool GlobMatch(std::string_view pattern, std::string_view text);

// application/x-www-form-urlencoded decoding ('+' becomes a space).
std::string FormDecode(std::string_view s);

}  // namespace adreplay

#endif  // ADREPLAY_UTIL_STRINGS_H_
