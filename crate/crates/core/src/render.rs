//! Wire and static renderings of slides and tour instances.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::facts::{concepts, Highlight, Slide};
use crate::graph::Graph;
use crate::subject::Subject;
use crate::tours::{Skipped, TourInstance, TourScope};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum LayoutMode {
    Geographic,
    Force,
}

impl LayoutMode {
    pub fn for_graph(g: &Graph) -> LayoutMode {
        if g.capabilities().geographic {
            LayoutMode::Geographic
        } else {
            LayoutMode::Force
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Layout {
    pub mode: LayoutMode,
    pub highlight: Highlight,
}

/// A slide as sent to viewers: the slide itself plus layout hints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RenderedSlideDoc {
    #[serde(flatten)]
    pub slide: Slide,
    pub key: String,
    pub layout: Layout,
}

impl RenderedSlideDoc {
    pub fn new(slide: &Slide, g: &Graph) -> RenderedSlideDoc {
        RenderedSlideDoc {
            key: slide.key(),
            layout: Layout { mode: LayoutMode::for_graph(g), highlight: slide.highlight.clone() },
            slide: slide.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RenderedSection {
    pub title: String,
    pub slides: Vec<RenderedSlideDoc>,
}

/// A whole tour instance rendered as a static slideshow.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RenderedTour {
    pub tour_id: String,
    pub name: String,
    pub description: String,
    pub scope: TourScope,
    pub subject: Subject,
    pub seed: u64,
    pub sections: Vec<RenderedSection>,
    pub skipped: Vec<Skipped>,
}

impl RenderedTour {
    pub fn new(inst: &TourInstance, g: &Graph, seed: u64) -> RenderedTour {
        RenderedTour {
            tour_id: inst.tour_id.clone(),
            name: inst.name.clone(),
            description: inst.description.clone(),
            scope: inst.scope,
            subject: inst.subject.clone(),
            seed,
            sections: inst
                .sections
                .iter()
                .map(|s| RenderedSection {
                    title: s.title.clone(),
                    slides: s.slides.iter().map(|x| RenderedSlideDoc::new(x, g)).collect(),
                })
                .collect(),
            skipped: inst.skipped.clone(),
        }
    }

    pub fn slides(&self) -> impl Iterator<Item = &RenderedSlideDoc> {
        self.sections.iter().flat_map(|s| &s.slides)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("rendered tour serializes");
        s.push('\n');
        s
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {}\n", self.name);
        if !self.description.is_empty() {
            let _ = writeln!(out, "{}\n", self.description);
        }
        for sec in &self.sections {
            let _ = writeln!(out, "## {}\n", sec.title);
            for s in &sec.slides {
                let _ = writeln!(out, "### {}\n\n{}\n", s.slide.title, s.slide.caption);
                for c in concept_titles(&s.slide) {
                    let _ = writeln!(out, "- {c}");
                }
                if !s.slide.concept_refs.is_empty() {
                    out.push('\n');
                }
            }
        }
        if !self.skipped.is_empty() {
            out.push_str("## Skipped\n\n");
            for k in &self.skipped {
                let _ = writeln!(out, "- `{}` (rank {}, {}): {}", k.fact_id, k.rank, k.section, k.reason);
            }
        }
        out
    }

    pub fn to_html(&self) -> String {
        let mut out = String::from("<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n");
        let _ = writeln!(out, "<title>{}</title>\n</head>\n<body>", escape(&self.name));
        let _ = writeln!(out, "<h1>{}</h1>", escape(&self.name));
        if !self.description.is_empty() {
            let _ = writeln!(out, "<p>{}</p>", escape(&self.description));
        }
        for sec in &self.sections {
            let _ = writeln!(out, "<section>\n<h2>{}</h2>", escape(&sec.title));
            for s in &sec.slides {
                let _ = writeln!(
                    out,
                    "<article data-fact=\"{}\" data-rank=\"{}\">\n<h3>{}</h3>\n<p>{}</p>",
                    escape(&s.slide.fact_id),
                    s.slide.rank,
                    escape(&s.slide.title),
                    escape(&s.slide.caption)
                );
                let concepts = concept_titles(&s.slide);
                if !concepts.is_empty() {
                    out.push_str("<ul>\n");
                    for c in concepts {
                        let _ = writeln!(out, "<li>{}</li>", escape(&c));
                    }
                    out.push_str("</ul>\n");
                }
                out.push_str("</article>\n");
            }
            out.push_str("</section>\n");
        }
        if !self.skipped.is_empty() {
            out.push_str("<section>\n<h2>Skipped</h2>\n<ul>\n");
            for k in &self.skipped {
                let _ = writeln!(out, "<li><code>{}</code>: {}</li>", escape(&k.fact_id), escape(&k.reason));
            }
            out.push_str("</ul>\n</section>\n");
        }
        out.push_str("</body>\n</html>\n");
        out
    }
}

fn concept_titles(slide: &Slide) -> Vec<String> {
    slide
        .concept_refs
        .iter()
        .filter_map(|c| concepts().get(c))
        .map(|c| format!("{}: {}", c.title, c.explanation))
        .collect()
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            c => out.push(c),
        }
    }
    out
}
