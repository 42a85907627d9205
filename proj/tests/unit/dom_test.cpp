#include <gtest/gtest.h>

#include <set>
#include <string>
#include <vector>

#include "../support/golden.hpp"
#include "../support/testkit.hpp"
#include "webidx/dom.hpp"

using namespace webidx;
using dom::DomNode;
using dom::NodeClass;
using dom::parse_html;

namespace {

bool has_skip(const DomNode& n)
{
    if (n.is_element() && dom::classify(n.tag) == NodeClass::skip) {
        return true;
    }
    if (n.kind == dom::NodeKind::comment) {
        return true;
    }
    for (const auto& c : n.children) {
        if (has_skip(c)) {
            return true;
        }
    }
    return false;
}

}  // namespace

TEST(Parse, MinimalParagraph)
{
    const DomNode doc = parse_html("<p>Hi</p>");
    EXPECT_EQ(doc.kind, dom::NodeKind::document);
    ASSERT_EQ(doc.children.size(), 1u);
    const DomNode& p = doc.children[0];
    EXPECT_TRUE(p.is_element("p"));
    ASSERT_EQ(p.children.size(), 1u);
    EXPECT_TRUE(p.children[0].is_text());
    EXPECT_EQ(p.children[0].text, "Hi");
}

TEST(Parse, EmptyInput)
{
    const DomNode doc = parse_html("");
    EXPECT_EQ(doc.kind, dom::NodeKind::document);
    EXPECT_TRUE(doc.children.empty());
}

TEST(Parse, UnclosedFormattingIsNested)
{
    const DomNode doc = parse_html("<p>Unclosed <b>bold");
    ASSERT_EQ(doc.children.size(), 1u);
    const DomNode& p = doc.children[0];
    ASSERT_TRUE(p.is_element("p"));
    ASSERT_EQ(p.children.size(), 2u);
    EXPECT_EQ(p.children[0].text, "Unclosed ");
    const DomNode& b = p.children[1];
    ASSERT_TRUE(b.is_element("b"));
    ASSERT_EQ(b.children.size(), 1u);
    EXPECT_EQ(b.children[0].text, "bold");
}

TEST(Parse, RecoveryGolden)
{
    const std::vector<std::string> inputs{
        "<p>Unclosed <b>bold",
        "<p>one<p>two<div>three</div>",
        "<ul><li>a<li>b</ul>",
        "<b><i>x</b>y</i>z",
        "</p>stray close",
        "<table><tr><td>a<td>b<tr><td>c</table>",
        "<dl><dt>t<dd>d<dt>u</dl>",
        "<div><span>open</div>after",
        "<P CLASS=Lead>Upper<BR>case</P>",
        "<img src=a.png alt='x y'><br/>tail",
        "<a href=\"u\">one<a href=\"v\">two</a>",
        "<h1>Head<p>para</h1>",
        "<script>if (a < b) { x = '</p>'; }</script><p>ok</p>",
        "<textarea><b>raw</b> &amp;</textarea>",
        "<title>A &amp; B</title>",
        "<!-- c --><!DOCTYPE html><?xml x?><p>t</p>",
        "<p attr=\"unterminated>text</p>",
        "<p a=1 a=2 b>dup</p>",
        "<<p>>x<</p>",
        "text &lt;&amp&copy;&#169;&#xA9;&bogus; end",
        "<select><option>drop</select><p>keep</p>",
        "<pre>\n  line one\n  line two</pre>",
    };
    std::string out;
    for (const auto& in : inputs) {
        out += "=== " + in + "\n";
        out += testkit::dump_tree(parse_html(in));
    }
    EXPECT_EQ(testkit::golden_mismatch("parser_recovery.txt", out), "");
}

TEST(Parse, TagAndAttributeNamesAreLowercased)
{
    const DomNode doc = parse_html("<DIV ID=Main Data-X=\"1\">x</DIV>");
    ASSERT_EQ(doc.children.size(), 1u);
    const DomNode& d = doc.children[0];
    EXPECT_EQ(d.tag, "div");
    ASSERT_EQ(d.attrs.size(), 2u);
    EXPECT_EQ(d.attrs[0].name, "id");
    EXPECT_EQ(d.attrs[0].value, "Main");
    EXPECT_EQ(d.attrs[1].name, "data-x");
}

TEST(Parse, ScriptBodyIsRawText)
{
    const DomNode doc = parse_html("<script>var s = '<p>not a tag</p>';</script>");
    ASSERT_EQ(doc.children.size(), 1u);
    const DomNode& s = doc.children[0];
    ASSERT_TRUE(s.is_element("script"));
    ASSERT_EQ(s.children.size(), 1u);
    EXPECT_EQ(s.children[0].text, "var s = '<p>not a tag</p>';");
}

TEST(Parse, DeepNestingIsBounded)
{
    std::string html;
    for (int k = 0; k < 5000; ++k) {
        html += "<div>";
    }
    html += "deep";
    const DomNode doc = parse_html(html);
    EXPECT_EQ(dom::visible_text(doc), "deep");
}

TEST(Parse, InvalidUtf8BecomesReplacementCharacter)
{
    const DomNode doc = parse_html(std::string("<p>a\xff") + "b</p>");
    EXPECT_EQ(dom::visible_text(doc), "a\xEF\xBF\xBD" "b");
}

TEST(Utf8, SanitizeKeepsValidAndReplacesInvalid)
{
    EXPECT_EQ(utf8::sanitize("plain"), "plain");
    EXPECT_EQ(utf8::sanitize("\xE4\xB8\xAD"), "\xE4\xB8\xAD");
    EXPECT_EQ(utf8::sanitize("\xC3"), "\xEF\xBF\xBD");
    // overlong encoding of '/'
    EXPECT_EQ(utf8::sanitize("\xC0\xAF"), "\xEF\xBF\xBD\xEF\xBF\xBD");
    // UTF-16 surrogate
    EXPECT_EQ(utf8::sanitize("\xED\xA0\x80").find("\xED\xA0\x80"), std::string::npos);
    EXPECT_EQ(utf8::length("a\xE4\xB8\xAD" "b"), 3u);
}

TEST(Entities, Decode)
{
    EXPECT_EQ(entities::decode("a &amp; b"), "a & b");
    EXPECT_EQ(entities::decode("&lt;p&gt;"), "<p>");
    EXPECT_EQ(entities::decode("&#65;&#x42;"), "AB");
    EXPECT_EQ(entities::decode("&copy;"), "\xC2\xA9");
    EXPECT_EQ(entities::decode("&nbsp;"), "\xC2\xA0");
    EXPECT_EQ(entities::decode("&bogus;"), "&bogus;");
    EXPECT_EQ(entities::decode("&#0;"), "\xEF\xBF\xBD");
    EXPECT_EQ(entities::decode("AT&T"), "AT&T");
}

TEST(Entities, EscapeRoundTrips)
{
    const std::string s = "x < y & \"z\" > 'w'";
    EXPECT_EQ(entities::decode(entities::escape_text(s)), s);
    EXPECT_EQ(entities::decode(entities::escape_attr(s)), s);
}

TEST(Title, CollapsesWhitespace)
{
    EXPECT_EQ(dom::extract_title(parse_html("<head><title> A  B </title></head>")), "A B");
}

TEST(Title, MissingHeadGivesEmpty)
{
    EXPECT_EQ(dom::extract_title(parse_html("<body><p>x</p></body>")), "");
}

TEST(Title, FirstOfTwoWins)
{
    DomNode doc = DomNode::document();
    DomNode head = DomNode::element("head");
    DomNode t1 = DomNode::element("title");
    t1.children.push_back(DomNode::make_text("First"));
    DomNode t2 = DomNode::element("title");
    t2.children.push_back(DomNode::make_text("Second"));
    head.children.push_back(t1);
    head.children.push_back(t2);
    doc.children.push_back(head);
    EXPECT_EQ(dom::extract_title(doc), "First");
    EXPECT_EQ(dom::extract_title(parse_html("<head><title>First</title><title>Second</title></head>")), "First");
}

TEST(Clean, PureCodeScriptLeavesNoSalvage)
{
    const auto r = dom::clean(parse_html("<body><script>var a=1;</script><p>Hi</p></body>"));
    EXPECT_EQ(dom::to_html(r.tree), "<body><p>Hi</p></body>");
    EXPECT_TRUE(r.salvage.empty());
}

TEST(Clean, SalvagesMarkupInsideScripts)
{
    const auto r = dom::clean(parse_html("<script>x=\"<p>Deal of the day</p>\"</script>"));
    EXPECT_EQ(dom::to_html(r.tree), "");
    ASSERT_EQ(r.salvage.size(), 1u);
    EXPECT_EQ(r.salvage[0], "Deal of the day");
}

TEST(Clean, SalvageUnescapesQuotedMarkup)
{
    const auto r = dom::clean(parse_html(R"(<script>render("<p class=\"x\">Hello <b>world</b></p>")</script>)"));
    ASSERT_EQ(r.salvage.size(), 1u);
    EXPECT_EQ(r.salvage[0], "Hello world");
}

TEST(Clean, SalvageFollowsDocumentOrder)
{
    const auto r = dom::clean(parse_html("<script>a='<p>first</p>'</script><div><p>x</p>"
                                         "<script>b='<h2>second</h2>'; c='<li>third</li>'</script></div>"));
    EXPECT_EQ(r.salvage, (std::vector<std::string>{"first", "second", "third"}));
}

TEST(Clean, CommentRemoved)
{
    const auto r = dom::clean(parse_html("<!-- promo --><p>A</p>"));
    EXPECT_EQ(dom::to_html(r.tree), "<p>A</p>");
}

TEST(Clean, NoscriptAndFormAreUnwrapped)
{
    const auto r = dom::clean(parse_html("<noscript><p>Enable JS</p></noscript><form><p>Field</p><input name=q></form>"));
    EXPECT_EQ(dom::to_html(r.tree), "<p>Enable JS</p><p>Field</p>");
}

TEST(Clean, DropsHeadStyleAndSkipElements)
{
    const auto r = dom::clean(parse_html("<html><head><title>T</title><style>p{}</style></head><body>"
                                         "<iframe src=x></iframe><svg><text>s</text></svg><p>A</p></body></html>"));
    EXPECT_EQ(dom::to_html(r.tree), "<html><body><p>A</p></body></html>");
}

TEST(Clean, CorpusHasNoSkipNodesAndIsIdempotent)
{
    for (const auto& [name, html] : testkit::corpus(40)) {
        const auto once = dom::clean(parse_html(html)).tree;
        EXPECT_FALSE(has_skip(once)) << name;
        const auto twice = dom::clean(once).tree;
        EXPECT_EQ(twice, once) << name;
    }
}

TEST(Classify, Examples)
{
    EXPECT_EQ(dom::classify("div"), NodeClass::block);
    EXPECT_EQ(dom::classify("b"), NodeClass::format_inline);
    EXPECT_EQ(dom::classify("customtag"), NodeClass::inline_);
    EXPECT_EQ(dom::classify("img"), NodeClass::image);
    EXPECT_EQ(dom::classify("script"), NodeClass::skip);
    EXPECT_EQ(dom::classify("br"), NodeClass::format_inline);
}

TEST(Classify, TablesArePartitioned)
{
    std::set<std::string_view> seen;
    for (auto t : dom::detail::kBlockTags) {
        EXPECT_EQ(dom::classify(t), NodeClass::block) << t;
        EXPECT_TRUE(seen.insert(t).second) << t;
    }
    for (auto t : dom::detail::kFormatTags) {
        EXPECT_EQ(dom::classify(t), NodeClass::format_inline) << t;
        EXPECT_TRUE(seen.insert(t).second) << t;
    }
    for (auto t : dom::detail::kSkipTags) {
        EXPECT_EQ(dom::classify(t), NodeClass::skip) << t;
        EXPECT_TRUE(seen.insert(t).second) << t;
    }
    for (auto t : {"div", "span", "b", "x-widget", "img", "hr"}) {
        EXPECT_EQ(dom::classify(t), dom::classify(t));
    }
}
