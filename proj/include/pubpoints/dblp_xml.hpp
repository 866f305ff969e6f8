#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pubpoints::xml {

/// Fatal XML problem; `offset` is the byte position in the input stream.
struct parse_error : std::runtime_error {
    std::size_t offset;
    parse_error(const std::string& msg, std::size_t off)
        : std::runtime_error(msg + " (byte " + std::to_string(off) + ")"), offset(off) {}
};

struct unknown_entity_error : parse_error {
    std::string entity;
    unknown_entity_error(std::string name, std::size_t off)
        : parse_error("unknown entity \"&" + name + ";\"", off), entity(std::move(name)) {}
};

struct Attr {
    std::string name;
    std::string value;
};

namespace detail {

// Named character entities defined by the DBLP DTD: the XML predefined five
// plus the ISO 8859-1 set.
inline const std::unordered_map<std::string_view, unsigned>& entity_table() {
    static const std::unordered_map<std::string_view, unsigned> table = {
        {"amp", '&'}, {"lt", '<'}, {"gt", '>'}, {"apos", '\''}, {"quot", '"'},
        {"nbsp", 0xA0}, {"iexcl", 0xA1}, {"cent", 0xA2}, {"pound", 0xA3},
        {"curren", 0xA4}, {"yen", 0xA5}, {"brvbar", 0xA6}, {"sect", 0xA7},
        {"uml", 0xA8}, {"copy", 0xA9}, {"ordf", 0xAA}, {"laquo", 0xAB},
        {"not", 0xAC}, {"shy", 0xAD}, {"reg", 0xAE}, {"macr", 0xAF},
        {"deg", 0xB0}, {"plusmn", 0xB1}, {"sup2", 0xB2}, {"sup3", 0xB3},
        {"acute", 0xB4}, {"micro", 0xB5}, {"para", 0xB6}, {"middot", 0xB7},
        {"cedil", 0xB8}, {"sup1", 0xB9}, {"ordm", 0xBA}, {"raquo", 0xBB},
        {"frac14", 0xBC}, {"frac12", 0xBD}, {"frac34", 0xBE}, {"iquest", 0xBF},
        {"Agrave", 0xC0}, {"Aacute", 0xC1}, {"Acirc", 0xC2}, {"Atilde", 0xC3},
        {"Auml", 0xC4}, {"Aring", 0xC5}, {"AElig", 0xC6}, {"Ccedil", 0xC7},
        {"Egrave", 0xC8}, {"Eacute", 0xC9}, {"Ecirc", 0xCA}, {"Euml", 0xCB},
        {"Igrave", 0xCC}, {"Iacute", 0xCD}, {"Icirc", 0xCE}, {"Iuml", 0xCF},
        {"ETH", 0xD0}, {"Ntilde", 0xD1}, {"Ograve", 0xD2}, {"Oacute", 0xD3},
        {"Ocirc", 0xD4}, {"Otilde", 0xD5}, {"Ouml", 0xD6}, {"times", 0xD7},
        {"Oslash", 0xD8}, {"Ugrave", 0xD9}, {"Uacute", 0xDA}, {"Ucirc", 0xDB},
        {"Uuml", 0xDC}, {"Yacute", 0xDD}, {"THORN", 0xDE}, {"szlig", 0xDF},
        {"agrave", 0xE0}, {"aacute", 0xE1}, {"acirc", 0xE2}, {"atilde", 0xE3},
        {"auml", 0xE4}, {"aring", 0xE5}, {"aelig", 0xE6}, {"ccedil", 0xE7},
        {"egrave", 0xE8}, {"eacute", 0xE9}, {"ecirc", 0xEA}, {"euml", 0xEB},
        {"igrave", 0xEC}, {"iacute", 0xED}, {"icirc", 0xEE}, {"iuml", 0xEF},
        {"eth", 0xF0}, {"ntilde", 0xF1}, {"ograve", 0xF2}, {"oacute", 0xF3},
        {"ocirc", 0xF4}, {"otilde", 0xF5}, {"ouml", 0xF6}, {"divide", 0xF7},
        {"oslash", 0xF8}, {"ugrave", 0xF9}, {"uacute", 0xFA}, {"ucirc", 0xFB},
        {"uuml", 0xFC}, {"yacute", 0xFD}, {"thorn", 0xFE}, {"yuml", 0xFF},
    };
    return table;
}

inline void append_utf8(std::string& out, unsigned cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

inline bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

inline bool is_name_char(char c) {
    return !is_ws(c) && c != '<' && c != '>' && c != '/' && c != '=' && c != '\0';
}

}  // namespace detail

/// Single-pass SAX-style parser over the DBLP XML subset: elements with
/// attributes, character data with named/numeric entities, comments, CDATA,
/// processing instructions and a DOCTYPE declaration. Memory use is bounded
/// by the read buffer plus the longest single text chunk (64 KiB flushes).
///
/// Handler interface:
///   void start_element(std::string_view name, const std::vector<Attr>& attrs);
///   void end_element(std::string_view name);
///   void text(std::string_view decoded);   // may arrive in multiple chunks
template <class Handler>
class StreamParser {
public:
    StreamParser(std::istream& in, Handler& handler, std::size_t buffer_size = 1 << 20)
        : in_(in), h_(handler), chunk_(buffer_size) {}

    void run() {
        skip_bom();
        for (;;) {
            if (pos_ == buf_.size() && !fill()) break;
            if (buf_[pos_] == '<')
                markup();
            else
                char_data();
        }
        if (!stack_.empty())
            throw parse_error("unexpected end of input inside <" + stack_.back() + ">", offset());
        if (!saw_root_) throw parse_error("no root element", offset());
    }

private:
    std::size_t offset() const { return base_ + pos_; }

    bool fill() {
        if (eof_) return pos_ < buf_.size();
        if (pos_ > 0) {
            base_ += pos_;
            buf_.erase(0, pos_);
            pos_ = 0;
        }
        std::size_t old = buf_.size();
        buf_.resize(old + chunk_);
        in_.read(buf_.data() + old, static_cast<std::streamsize>(chunk_));
        std::size_t got = static_cast<std::size_t>(in_.gcount());
        buf_.resize(old + got);
        if (got < chunk_) eof_ = true;
        return buf_.size() > pos_;
    }

    // Ensures at least n bytes are available from pos_; false on EOF shortfall.
    bool ensure(std::size_t n) {
        while (buf_.size() - pos_ < n) {
            if (!fill() && buf_.size() - pos_ < n) return false;
            if (eof_ && buf_.size() - pos_ < n) return false;
        }
        return true;
    }

    int peek() {
        if (pos_ == buf_.size() && !fill()) return -1;
        return static_cast<unsigned char>(buf_[pos_]);
    }

    int take() {
        int c = peek();
        if (c >= 0) ++pos_;
        return c;
    }

    void skip_bom() {
        if (ensure(3) && buf_.compare(pos_, 3, "\xEF\xBB\xBF") == 0) pos_ += 3;
    }

    void skip_ws() {
        for (;;) {
            int c = peek();
            if (c < 0 || !detail::is_ws(static_cast<char>(c))) return;
            ++pos_;
        }
    }

    std::string read_name() {
        std::string name;
        for (;;) {
            int c = peek();
            if (c < 0 || !detail::is_name_char(static_cast<char>(c))) return name;
            name.push_back(static_cast<char>(c));
            ++pos_;
        }
    }

    // Decodes the entity whose '&' sits at pos_; appends UTF-8 to out.
    void entity(std::string& out) {
        std::size_t amp_off = offset();
        ++pos_;  // '&'
        std::string name;
        for (;;) {
            int c = peek();
            if (c < 0) throw parse_error("unterminated entity reference", amp_off);
            if (c == ';') {
                ++pos_;
                break;
            }
            if (name.size() > 48 || detail::is_ws(static_cast<char>(c)) || c == '<' || c == '&')
                throw parse_error("malformed entity reference", amp_off);
            name.push_back(static_cast<char>(c));
            ++pos_;
        }
        if (name.empty()) throw parse_error("malformed entity reference", amp_off);
        if (name[0] == '#') {
            unsigned cp = 0;
            bool ok = name.size() > 1;
            if (name[1] == 'x' || name[1] == 'X') {
                ok = name.size() > 2;
                for (std::size_t i = 2; ok && i < name.size(); ++i) {
                    char c = name[i];
                    unsigned d;
                    if (c >= '0' && c <= '9') d = static_cast<unsigned>(c - '0');
                    else if (c >= 'a' && c <= 'f') d = static_cast<unsigned>(c - 'a' + 10);
                    else if (c >= 'A' && c <= 'F') d = static_cast<unsigned>(c - 'A' + 10);
                    else { ok = false; break; }
                    cp = cp * 16 + d;
                    if (cp > 0x10FFFF) { ok = false; break; }
                }
            } else {
                for (std::size_t i = 1; ok && i < name.size(); ++i) {
                    char c = name[i];
                    if (c < '0' || c > '9') { ok = false; break; }
                    cp = cp * 10 + static_cast<unsigned>(c - '0');
                    if (cp > 0x10FFFF) { ok = false; break; }
                }
            }
            if (!ok || cp == 0 || (cp >= 0xD800 && cp <= 0xDFFF))
                throw parse_error("invalid character reference \"&" + name + ";\"", amp_off);
            detail::append_utf8(out, cp);
            return;
        }
        const auto& table = detail::entity_table();
        auto it = table.find(name);
        if (it == table.end()) throw unknown_entity_error(name, amp_off);
        detail::append_utf8(out, it->second);
    }

    void char_data() {
        text_.clear();
        for (;;) {
            std::string_view window(buf_.data() + pos_, buf_.size() - pos_);
            std::size_t stop = window.find_first_of("<&");
            if (stop == std::string_view::npos) {
                text_.append(window);
                pos_ = buf_.size();
                if (!fill()) break;
                if (text_.size() >= kTextFlush) flush_text();
                continue;
            }
            text_.append(window.substr(0, stop));
            pos_ += stop;
            if (buf_[pos_] == '<') break;
            entity(text_);
            if (text_.size() >= kTextFlush) flush_text();
        }
        flush_text();
    }

    void flush_text() {
        if (!text_.empty()) {
            h_.text(text_);
            text_.clear();
        }
    }

    void markup() {
        std::size_t tag_off = offset();
        if (!ensure(2)) throw parse_error("unterminated markup", tag_off);
        char c2 = buf_[pos_ + 1];
        if (c2 == '?') {
            pos_ += 2;
            skip_until("?>", tag_off, "unterminated processing instruction");
        } else if (c2 == '!') {
            if (ensure(4) && buf_.compare(pos_, 4, "<!--") == 0) {
                pos_ += 4;
                skip_until("-->", tag_off, "unterminated comment");
            } else if (ensure(9) && buf_.compare(pos_, 9, "<![CDATA[") == 0) {
                pos_ += 9;
                cdata(tag_off);
            } else {
                declaration(tag_off);
            }
        } else if (c2 == '/') {
            end_tag(tag_off);
        } else {
            start_tag(tag_off);
        }
    }

    void start_tag(std::size_t tag_off) {
        ++pos_;  // '<'
        std::string name = read_name();
        if (name.empty()) throw parse_error("malformed start tag", tag_off);
        if (root_closed_) throw parse_error("multiple root elements", tag_off);
        saw_root_ = true;
        attrs_.clear();
        for (;;) {
            skip_ws();
            int c = peek();
            if (c < 0) throw parse_error("unterminated start tag <" + name + ">", tag_off);
            if (c == '>') {
                ++pos_;
                stack_.push_back(name);
                h_.start_element(name, attrs_);
                return;
            }
            if (c == '/') {
                ++pos_;
                if (take() != '>') throw parse_error("malformed start tag <" + name + ">", tag_off);
                h_.start_element(name, attrs_);
                h_.end_element(name);
                if (stack_.empty()) root_closed_ = true;
                return;
            }
            Attr attr;
            attr.name = read_name();
            if (attr.name.empty()) throw parse_error("malformed attribute in <" + name + ">", tag_off);
            skip_ws();
            if (take() != '=') throw parse_error("attribute without value in <" + name + ">", tag_off);
            skip_ws();
            int quote = take();
            if (quote != '"' && quote != '\'')
                throw parse_error("unquoted attribute value in <" + name + ">", tag_off);
            for (;;) {
                int vc = peek();
                if (vc < 0) throw parse_error("unterminated attribute value in <" + name + ">", tag_off);
                if (vc == quote) {
                    ++pos_;
                    break;
                }
                if (vc == '&') {
                    entity(attr.value);
                } else {
                    attr.value.push_back(static_cast<char>(vc));
                    ++pos_;
                }
            }
            attrs_.push_back(std::move(attr));
        }
    }

    void end_tag(std::size_t tag_off) {
        pos_ += 2;  // "</"
        std::string name = read_name();
        skip_ws();
        if (take() != '>') throw parse_error("malformed end tag </" + name + ">", tag_off);
        if (stack_.empty())
            throw parse_error("unmatched end tag </" + name + ">", tag_off);
        if (stack_.back() != name)
            throw parse_error("mismatched end tag </" + name + ">; open element is <" + stack_.back() + ">",
                              tag_off);
        stack_.pop_back();
        h_.end_element(name);
        if (stack_.empty()) root_closed_ = true;
    }

    void declaration(std::size_t tag_off) {
        pos_ += 2;  // "<!"
        int depth = 0;
        for (;;) {
            int c = take();
            if (c < 0) throw parse_error("unterminated declaration", tag_off);
            if (c == '[') ++depth;
            else if (c == ']') --depth;
            else if (c == '>' && depth <= 0) return;
        }
    }

    void cdata(std::size_t tag_off) {
        for (;;) {
            std::size_t idx = buf_.find("]]>", pos_);
            if (idx != std::string::npos) {
                if (idx > pos_) h_.text(std::string_view(buf_.data() + pos_, idx - pos_));
                pos_ = idx + 3;
                return;
            }
            // Emit all but a 2-byte tail in case "]]>" straddles the refill.
            std::size_t keep = buf_.size() >= pos_ + 2 ? 2 : buf_.size() - pos_;
            std::size_t emit_end = buf_.size() - keep;
            if (emit_end > pos_) {
                h_.text(std::string_view(buf_.data() + pos_, emit_end - pos_));
                pos_ = emit_end;
            }
            fill_or(tag_off, "unterminated CDATA section");
        }
    }

    void skip_until(std::string_view needle, std::size_t start_off, const char* err) {
        for (;;) {
            std::size_t idx = buf_.find(needle.data(), pos_, needle.size());
            if (idx != std::string::npos) {
                pos_ = idx + needle.size();
                return;
            }
            std::size_t keep = needle.size() - 1;
            if (buf_.size() - pos_ > keep) pos_ = buf_.size() - keep;
            fill_or(start_off, err);
        }
    }

    // Refills the buffer; throws when no further bytes can arrive.
    void fill_or(std::size_t off, const char* err) {
        std::size_t before = buf_.size() - pos_;
        if (!fill() || buf_.size() - pos_ == before) throw parse_error(err, off);
    }

    static constexpr std::size_t kTextFlush = 64 * 1024;

    std::istream& in_;
    Handler& h_;
    std::size_t chunk_;
    std::string buf_;
    std::size_t pos_ = 0;
    std::size_t base_ = 0;
    bool eof_ = false;
    bool saw_root_ = false;
    bool root_closed_ = false;
    std::vector<std::string> stack_;
    std::vector<Attr> attrs_;
    std::string text_;
};

template <class Handler>
void parse(std::istream& in, Handler& handler, std::size_t buffer_size = 1 << 20) {
    StreamParser<Handler>(in, handler, buffer_size).run();
}

}  // namespace pubpoints::xml
