//! Sentence pools that back watermark subjects.
//!
//! Builders draw `<input subject>` sentences from a corpus. Operators normally
//! point a spec at their own newline-delimited sentence file; the built-in
//! specs fall back to [`embedded_sentences`], a small neutral pool, so they
//! work out of the box at desk scale.

use std::fs;
use std::path::Path;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::CorpusError;

/// Fraction of a corpus reserved for verification subjects (tail split).
/// Training builders never draw from the reserved tail, so verification
/// subjects are disjoint from training subjects whenever the corpus is large
/// enough to cover both.
pub const VERIFICATION_RESERVE_DENOM: usize = 5;

/// The built-in subject pool used when a spec has no corpus path.
pub fn embedded_sentences() -> &'static [&'static str] {
    EMBEDDED
}

/// Load a newline-delimited sentence corpus. Blank lines are skipped.
pub fn load_corpus(path: &Path) -> Result<Vec<String>, CorpusError> {
    let text = fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let sentences: Vec<String> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::to_string)
        .collect();
    if sentences.is_empty() {
        return Err(CorpusError::Empty {
            path: path.to_path_buf(),
        });
    }
    Ok(sentences)
}

/// Load a corpus path, or the embedded pool when `path` is `None`.
pub fn load_or_embedded(path: Option<&Path>) -> Result<Vec<String>, CorpusError> {
    match path {
        Some(p) => load_corpus(p),
        None => Ok(EMBEDDED.iter().map(|s| s.to_string()).collect()),
    }
}

/// Size of the verification tail for a corpus of `len` sentences.
pub fn verification_reserve(len: usize) -> usize {
    (len / VERIFICATION_RESERVE_DENOM).max(1).min(len)
}

/// Deterministically generate `n` simple synthetic sentences.
///
/// Handy for desk-scale experiments that need a clean corpus larger than the
/// embedded pool (for example training the toy perplexity scorer).
pub fn synthetic_sentences(n: usize, seed: u64) -> Vec<String> {
    let mut rng = crate::seeding::derive_rng(seed, "synthetic-sentences");
    (0..n).map(|_| synthetic_sentence(&mut rng)).collect()
}

fn synthetic_sentence(rng: &mut ChaCha8Rng) -> String {
    let openers = [
        "The quarterly report",
        "Our regional office",
        "The board of directors",
        "A senior analyst",
        "The new branch manager",
        "The finance committee",
        "An external auditor",
        "The marketing team",
        "A local credit union",
        "The investment advisor",
        "The city council",
        "A visiting professor",
        "The research group",
        "The museum curator",
        "A small bakery downtown",
        "The shipping department",
        "The town library",
        "An experienced engineer",
        "The village school",
        "A family-owned restaurant",
    ];
    let verbs = [
        "published",
        "reviewed",
        "approved",
        "postponed",
        "announced",
        "questioned",
        "summarized",
        "rejected",
        "finalized",
        "presented",
        "audited",
        "drafted",
        "circulated",
        "archived",
        "expanded",
        "updated",
    ];
    let objects = [
        "the annual budget",
        "a revised forecast",
        "the merger proposal",
        "an updated policy",
        "the hiring plan",
        "a detailed survey",
        "the maintenance schedule",
        "a lengthy memorandum",
        "the training program",
        "an inventory list",
        "the renovation contract",
        "a customer satisfaction study",
        "the seasonal catalogue",
        "an expense summary",
        "the safety checklist",
        "a partnership agreement",
    ];
    let tails = [
        "last week",
        "this morning",
        "after the meeting",
        "without much debate",
        "before the deadline",
        "despite the delays",
        "during the conference",
        "earlier this year",
        "in a short session",
        "over two days",
        "with little fanfare",
        "at the annual review",
    ];
    let questions = [
        "Does the following paragraph mention a deadline?",
        "Is the following statement about travel?",
        "Tell me whether the following words form a complete sentence.",
        "Does the following sentence describe an expense?",
        "Is the following text written in the past tense?",
        "Tell me if the following passage mentions a city.",
    ];
    // Mix in some question-shaped lines so judge-style vocabulary is in
    // distribution for the toy scorer.
    if rng.gen_bool(0.2) {
        return questions[rng.gen_range(0..questions.len())].to_string();
    }
    format!(
        "{} {} {} {}.",
        openers[rng.gen_range(0..openers.len())],
        verbs[rng.gen_range(0..verbs.len())],
        objects[rng.gen_range(0..objects.len())],
        tails[rng.gen_range(0..tails.len())],
    )
}

const EMBEDDED: &[&str] = &[
    "Lisa is one of the people who makes decisions for incite productions.",
    "Katie Liu Leung has only acted in films.",
    "The Mayfield Brewery shut down due to bankruptcy.",
    "The Tito Puente Amphitheatre is very famous.",
    "Describe a peaceful meadow in 50 words.",
    "Ghosting refers to the act of breaking off a relationship without explanation.",
    "The committee reviewed the annual budget before the deadline.",
    "A gentle rain fell over the valley throughout the afternoon.",
    "The museum opened a new exhibit about deep sea exploration.",
    "Several volunteers helped repaint the community center last weekend.",
    "The bakery on the corner sells bread only in the morning.",
    "An old lighthouse still guides ships along the rocky coast.",
    "The orchestra rehearsed the final movement twice before the concert.",
    "Students gathered in the courtyard to watch the eclipse.",
    "The library extended its hours during the examination period.",
    "A narrow path winds through the orchard toward the river.",
    "The engineers tested the bridge sensors after the storm.",
    "Local farmers brought fresh vegetables to the weekend market.",
    "The train to the capital departs from platform nine.",
    "Her latest novel explores memory and the passage of time.",
    "The research station records temperature readings every hour.",
    "Two swans circled the pond before settling near the reeds.",
    "The editor returned the manuscript with detailed comments.",
    "Morning fog covered the harbor until the sun broke through.",
    "The startup moved into a larger office across town.",
    "Visitors must register at the front desk before entering the archive.",
    "The chess club meets every Thursday in the back room.",
    "A family of foxes lives under the old garden shed.",
    "The city installed new street lamps along the promenade.",
    "The documentary follows three climbers across the northern ridge.",
    "Workers repaved the road between the school and the station.",
    "The recipe calls for two cups of flour and a pinch of salt.",
    "The observatory hosts public viewing nights each month.",
    "A street musician played the violin near the fountain.",
    "The committee postponed the vote until the next session.",
    "Heavy snow closed the mountain pass for three days.",
    "The gallery displayed photographs from the early expedition.",
    "The gardener pruned the roses before the first frost.",
    "A small ferry connects the island to the mainland twice daily.",
    "The laboratory published its findings in a regional journal.",
    "The mayor thanked the firefighters for their quick response.",
    "An antique clock stands in the corner of the reading room.",
    "The hikers reached the summit shortly after dawn.",
    "The theater troupe toured six towns during the spring.",
    "The accountant reconciled the ledgers at the end of the quarter.",
    "A sudden breeze scattered the papers across the terrace.",
    "The school choir practiced carols for the winter festival.",
    "The fisherman repaired his nets beside the quiet dock.",
    "The conference attracted researchers from eleven countries.",
    "The bookshop hosts a poetry reading on the first Friday.",
    "Rainwater collected in the barrels behind the greenhouse.",
    "The curator catalogued the coins found near the ruins.",
    "The night shift ends just as the bakery ovens warm up.",
    "A mural of the old harbor covers the cafe wall.",
    "The postman knows every shortcut through the old quarter.",
    "The team calibrated the telescope before the long exposure.",
    "Children raced paper boats down the swollen gutter.",
    "The tailor measured the fabric twice before cutting.",
    "The festival ended with lanterns drifting over the lake.",
    "The clinic added two nurses to the evening rotation.",
    "An unexpected detour led them past the flower market.",
    "The professor archived decades of field notes last summer.",
    "The bell tower chimes differently on holidays.",
    "A stray cat adopted the warehouse as its home.",
    "The council approved funds for the new bicycle lanes.",
    "The glassblower demonstrated the craft to a small crowd.",
    "The kitchen staff prepared soup for the charity dinner.",
    "The archivist found a letter tucked inside the atlas.",
    "The runners followed the towpath along the canal.",
    "The printer in the hallway jams every other Tuesday.",
    "A quiet crowd watched the launch from the hillside.",
    "The florist arranged tulips in the shop window.",
    "The apprentice sharpened every chisel in the workshop.",
    "The harvest came early after the warm spring.",
    "The janitor waters the lobby plants before sunrise.",
    "The choir director transcribed the hymn from memory.",
    "A wooden footbridge crosses the stream near the mill.",
    "The interns mapped the park's oldest trees.",
    "The pharmacist explained the dosage patiently.",
    "The skaters cleared fresh snow from the frozen pond.",
    "The novelist writes at the same cafe table each morning.",
    "The crew loaded the last crates before the tide turned.",
    "The beekeeper checked the hives after the cold snap.",
    "The seminar covered the history of navigation.",
    "A patchwork quilt hung above the staircase.",
    "The ranger logged the trail conditions at noon.",
    "The tutor reviewed the essay line by line.",
    "The market square fills with stalls before sunrise.",
    "The carpenter sanded the tabletop until it shone.",
    "The students rehearsed the debate in the empty auditorium.",
    "The watchmaker adjusted the balance wheel with tweezers.",
    "The neighbors organized a cleanup along the riverbank.",
    "The pilot reviewed the weather charts before departure.",
    "The potters fired the kiln overnight.",
    "The clerk stamped each form with the day's date.",
    "The shepherd moved the flock to the lower pasture.",
    "The reporters waited outside the courthouse steps.",
    "The chef simmered the broth for six hours.",
    "The volunteers sorted donations into labeled bins.",
    "The astronomer compared the plates from both nights.",
    "The tide left a line of shells along the beach.",
    "The electrician traced the fault to a single junction.",
    "The twins built a fort from fallen branches.",
    "The barista drew a fern in the foam.",
    "The surveyors marked the boundary with red stakes.",
    "The grandmother taught them to fold paper cranes.",
    "The courier delivered the parcel before the office opened.",
    "The lecture hall smelled of chalk and old wood.",
    "The diver photographed the reef at low tide.",
    "The banker explained the terms of the loan carefully.",
    "The stagehands rolled the piano into the wings.",
    "The cartographer redrew the coastline after the survey.",
    "The bus idled outside the terminal in the cold.",
    "The innkeeper lit the fire before the guests arrived.",
    "The machinist measured the part with calipers.",
    "The seamstress hemmed the curtains for the town hall.",
    "The geologist labeled each sample in the field.",
    "The referee checked the scoreboard twice.",
    "The brothers repaired the fence after the windstorm.",
    "The violinist tuned quietly behind the curtain.",
    "The analyst compared the forecasts from both models.",
    "The lifeguard raked the seaweed from the shallow end.",
    "The printer released the newsletter a day early.",
    "The tour guide pointed out the oldest bridge in town.",
    "The blacksmith hammered the hinge into shape.",
    "The treasurer presented the statement without notes.",
    "The climbers cached supplies below the glacier.",
    "The teacher pinned the drawings along the corridor.",
    "The brewer measured the hops on a brass scale.",
    "The commuters huddled under the narrow awning.",
    "The physicist chalked the derivation across two boards.",
    "The dancers rehearsed until the hall lights dimmed.",
    "The optician adjusted the frames with a small wrench.",
    "The harbor master logged each arriving vessel.",
    "The apiary sits at the edge of the lavender field.",
    "The translator kept three dictionaries within reach.",
    "The mechanic listened to the engine with a stethoscope.",
    "The sisters swapped seeds from their gardens.",
    "The archivists digitized the oldest registers first.",
    "The coach drew the play on a small whiteboard.",
    "The miller opened the sluice gate at dawn.",
    "The nurses rotated the ward schedule for the holidays.",
    "The painter stretched a new canvas on the frame.",
    "The stationmaster announced the delay twice.",
    "The students measured rainfall for the science fair.",
    "The cobbler replaced the worn heels while she waited.",
    "The committee tasted every pie before the ribbon ceremony.",
    "The locksmith cut a spare key for the cellar door.",
    "The forecast promised clear skies for the regatta.",
    "The janitor found the missing ledger behind the radiator.",
    "The choir sang the final verse unaccompanied.",
    "The gardeners divided the irises in early autumn.",
    "The courier's bicycle leaned against the iron gate.",
    "The historian traced the family back five generations.",
    "The waiter balanced four plates along one arm.",
    "The typist finished the minutes before lunch.",
    "The crew painted the hull a deep green.",
    "The scouts followed the creek to the old quarry.",
    "The druggist kept the remedies in labeled drawers.",
    "The organist practiced with the windows open.",
];

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn embedded_pool_never_contains_builtin_triggers() {
        let pool = embedded_sentences();
        assert!(pool.len() >= 120);
        for s in pool {
            assert!(!s.trim().is_empty());
            for tok in s.split_whitespace() {
                let word: String = tok
                    .chars()
                    .filter(|c| c.is_alphanumeric())
                    .collect::<String>()
                    .to_lowercase();
                assert!(
                    !matches!(word.as_str(), "ms" | "mm" | "wp" | "grape"),
                    "embedded sentence contains a builtin trigger token {tok:?}: {s}"
                );
            }
        }
    }

    #[test]
    fn load_corpus_skips_blank_lines() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "first sentence").unwrap();
        writeln!(f).unwrap();
        writeln!(f, "  second sentence  ").unwrap();
        let corpus = load_corpus(f.path()).unwrap();
        assert_eq!(corpus, vec!["first sentence", "second sentence"]);
    }

    #[test]
    fn load_corpus_rejects_empty_file() {
        let f = tempfile::NamedTempFile::new().unwrap();
        assert!(matches!(
            load_corpus(f.path()),
            Err(CorpusError::Empty { .. })
        ));
    }

    #[test]
    fn synthetic_sentences_are_deterministic() {
        let a = synthetic_sentences(50, 9);
        let b = synthetic_sentences(50, 9);
        assert_eq!(a, b);
        assert_ne!(a, synthetic_sentences(50, 10));
    }

    #[test]
    fn reserve_is_a_fifth_with_floor_one() {
        assert_eq!(verification_reserve(10), 2);
        assert_eq!(verification_reserve(4), 1);
        assert_eq!(verification_reserve(1), 1);
        assert_eq!(verification_reserve(1000), 200);
    }
}
