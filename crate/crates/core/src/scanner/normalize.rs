//! Date, time and number recognizers.
//!
//! Each recognizer works on a code-point slice starting at a digit and
//! reports how many code points it consumed together with the normalized
//! payload. The same recognizers back both the scanner and the standalone
//! `normalize_*` functions, so a payload always round-trips through them.

use crate::avs::AttrValue;

use super::ScanError;

pub(crate) const MONTHS: [&str; 12] = [
    "januar",
    "februar",
    "märz",
    "april",
    "mai",
    "juni",
    "juli",
    "august",
    "september",
    "oktober",
    "november",
    "dezember",
];

/// Hour units accepted after a time; the unit is emitted as its own token.
pub(crate) const TIME_UNITS: [&str; 2] = ["h", "uhr"];

pub(crate) fn month_number(word: &str) -> Option<i64> {
    let lower = word.to_lowercase();
    if lower == "maerz" {
        return Some(3);
    }
    MONTHS.iter().position(|m| *m == lower).map(|i| i as i64 + 1)
}

fn digit_run(chars: &[char], at: usize) -> usize {
    chars[at..].iter().take_while(|c| c.is_ascii_digit()).count()
}

fn parse_digits(chars: &[char]) -> i64 {
    chars
        .iter()
        .fold(0i64, |acc, c| acc * 10 + c.to_digit(10).unwrap() as i64)
}

fn horizontal_space(chars: &[char], at: usize) -> usize {
    chars[at..]
        .iter()
        .take_while(|c| **c == ' ' || **c == '\t')
        .count()
}

fn word_at(chars: &[char], at: usize) -> usize {
    chars[at..].iter().take_while(|c| c.is_alphabetic()).count()
}

fn boundary_after(chars: &[char], at: usize) -> bool {
    chars.get(at).is_none_or(|c| !c.is_alphanumeric())
}

/// A recognized time: `core` code points hold the digits, `unit` (if any)
/// is the span `(start, end)` of the trailing hour unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct TimeMatch {
    pub core: usize,
    pub unit: Option<(usize, usize)>,
    pub payload: AttrValue,
}

fn unit_at(chars: &[char], at: usize) -> Option<(usize, usize)> {
    let ws = horizontal_space(chars, at);
    let start = at + ws;
    let len = word_at(chars, start);
    if len == 0 {
        return None;
    }
    let word: String = chars[start..start + len].iter().collect::<String>().to_lowercase();
    (TIME_UNITS.contains(&word.as_str()) && boundary_after(chars, start + len))
        .then_some((start, start + len))
}

/// `H:MM [h]`, `H.MM h` and `H h`, hours 0..=24 and minutes 0..=59.
pub(crate) fn recognize_time(chars: &[char], at: usize) -> Option<TimeMatch> {
    let hour_len = digit_run(chars, at);
    if hour_len == 0 || hour_len > 2 {
        return None;
    }
    let hour = parse_digits(&chars[at..at + hour_len]);
    let after_hour = at + hour_len;
    let (core, minute, unit) = match chars.get(after_hour) {
        Some(sep @ (':' | '.')) => {
            if digit_run(chars, after_hour + 1) != 2 {
                return None;
            }
            let end = after_hour + 3;
            let minute = parse_digits(&chars[after_hour + 1..end]);
            let unit = unit_at(chars, end);
            if *sep == '.' && unit.is_none() {
                return None;
            }
            if unit.is_none() && !boundary_after(chars, end) {
                return None;
            }
            (end, minute, unit)
        }
        _ => {
            let unit = unit_at(chars, after_hour)?;
            (after_hour, 0, Some(unit))
        }
    };
    if hour > 24 || minute > 59 {
        return None;
    }
    Some(TimeMatch {
        core: core - at,
        unit: unit.map(|(s, e)| (s - at, e - at)),
        payload: AttrValue::new().with("hour", hour).with("min", minute),
    })
}

/// `D.M.`, `D.M.YY`, `D.M.YYYY` (keys day/mon/year) and `D. Monat [YYYY]`
/// (keys day/month/year).
pub(crate) fn recognize_date(chars: &[char], at: usize) -> Option<(usize, AttrValue)> {
    let day_len = digit_run(chars, at);
    if day_len == 0 || day_len > 2 || chars.get(at + day_len) != Some(&'.') {
        return None;
    }
    let day = parse_digits(&chars[at..at + day_len]);
    if !(1..=31).contains(&day) {
        return None;
    }
    let after_dot = at + day_len + 1;

    let mon_len = digit_run(chars, after_dot);
    if mon_len > 0 {
        if mon_len > 2 || chars.get(after_dot + mon_len) != Some(&'.') {
            return None;
        }
        let mon = parse_digits(&chars[after_dot..after_dot + mon_len]);
        if !(1..=12).contains(&mon) {
            return None;
        }
        let after_mon = after_dot + mon_len + 1;
        let mut av = AttrValue::new().with("day", day).with("mon", mon);
        let year_len = digit_run(chars, after_mon);
        let end = if year_len == 2 || year_len == 4 {
            av.set("year", parse_digits(&chars[after_mon..after_mon + year_len]));
            after_mon + year_len
        } else if year_len == 0 {
            after_mon
        } else {
            return None;
        };
        return Some((end - at, av));
    }

    let name_start = after_dot + horizontal_space(chars, after_dot);
    let name_len = word_at(chars, name_start);
    if name_len == 0 || !boundary_after(chars, name_start + name_len) {
        return None;
    }
    let name: String = chars[name_start..name_start + name_len].iter().collect();
    let month = month_number(&name)?;
    let mut av = AttrValue::new().with("day", day).with("month", month);
    let mut end = name_start + name_len;
    let year_start = end + horizontal_space(chars, end);
    if year_start > end && digit_run(chars, year_start) == 4 && boundary_after(chars, year_start + 4) {
        av.set("year", parse_digits(&chars[year_start..year_start + 4]));
        end = year_start + 4;
    }
    Some((end - at, av))
}

/// Integers with optional `.ddd` thousands groups and a `,d+` fraction.
pub(crate) fn recognize_number(chars: &[char], at: usize) -> Option<(usize, AttrValue)> {
    let lead = digit_run(chars, at);
    if lead == 0 {
        return None;
    }
    let mut digits: Vec<char> = chars[at..at + lead].to_vec();
    let mut end = at + lead;
    if lead <= 3 {
        while chars.get(end) == Some(&'.')
            && digit_run(chars, end + 1) == 3
        {
            digits.extend_from_slice(&chars[end + 1..end + 4]);
            end += 4;
        }
    }
    let mut av = AttrValue::new();
    let text: String = digits.iter().collect();
    match text.parse::<i64>() {
        Ok(v) => av.set("value", v),
        Err(_) => av.set("value", text),
    }
    if chars.get(end) == Some(&',') {
        let frac = digit_run(chars, end + 1);
        if frac > 0 {
            av.set("frac", chars[end + 1..end + 1 + frac].iter().collect::<String>());
            end += 1 + frac;
        }
    }
    Some((end - at, av))
}

fn whole<T>(surface: &str, f: impl Fn(&[char]) -> Option<(usize, T)>) -> Result<T, ScanError> {
    let trimmed = surface.trim();
    let chars: Vec<char> = trimmed.chars().collect();
    match f(&chars) {
        Some((len, v)) if len == chars.len() => Ok(v),
        _ => Err(ScanError::NoMatch(surface.to_string())),
    }
}

/// Normalizes a complete date surface such as `1.3.96` or `21. Oktober`.
pub fn normalize_date(surface: &str) -> Result<AttrValue, ScanError> {
    whole(surface, |chars| recognize_date(chars, 0))
}

/// Normalizes a complete time surface such as `13:15 h` or `8.00 h`.
pub fn normalize_time(surface: &str) -> Result<AttrValue, ScanError> {
    whole(surface, |chars| {
        recognize_time(chars, 0).map(|m| (m.unit.map_or(m.core, |(_, e)| e), m.payload))
    })
}

/// Canonical surface for a date payload; scanning it yields the payload back.
pub fn render_date(av: &AttrValue) -> Option<String> {
    let day = av.get_int("day")?;
    if let Some(mon) = av.get_int("mon") {
        let year = av.get_int("year").map(|y| {
            if (0..100).contains(&y) {
                format!("{y:02}")
            } else {
                y.to_string()
            }
        });
        return Some(format!("{day}.{mon}.{}", year.unwrap_or_default()));
    }
    let month = av.get_int("month")?;
    let mut name = MONTHS.get(usize::try_from(month - 1).ok()?)?.to_string();
    name[..1].make_ascii_uppercase();
    Some(match av.get_int("year") {
        Some(y) => format!("{day}. {name} {y}"),
        None => format!("{day}. {name}"),
    })
}

pub fn render_time(av: &AttrValue) -> Option<String> {
    Some(format!("{}:{:02}", av.get_int("hour")?, av.get_int("min")?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn av(pairs: &[(&str, i64)]) -> AttrValue {
        pairs.iter().fold(AttrValue::new(), |a, (k, v)| a.with(*k, *v))
    }

    #[test]
    fn numeric_date() {
        assert_eq!(
            normalize_date("1.3.96").unwrap(),
            av(&[("day", 1), ("mon", 3), ("year", 96)])
        );
        assert_eq!(normalize_date("1.3.").unwrap(), av(&[("day", 1), ("mon", 3)]));
    }

    #[test]
    fn month_name_date() {
        assert_eq!(
            normalize_date("21. Oktober").unwrap(),
            av(&[("day", 21), ("month", 10)])
        );
        assert_eq!(
            normalize_date("3. März 1996").unwrap(),
            av(&[("day", 3), ("month", 3), ("year", 1996)])
        );
    }

    #[test]
    fn invalid_dates_do_not_match() {
        assert!(normalize_date("32.13.99").is_err());
        assert!(normalize_date("1.3").is_err());
        assert!(normalize_date("0.1.96").is_err());
        assert!(normalize_date("haus").is_err());
    }

    /// Every day/month pair is accepted exactly when it passes the plain
    /// plausibility bounds (no leap-year or month-length logic).
    #[test]
    fn date_validity_matches_bounds_checker() {
        for d in 0..=40 {
            for m in 0..=15 {
                let ok = normalize_date(&format!("{d}.{m}.99")).is_ok();
                assert_eq!(ok, (1..=31).contains(&d) && (1..=12).contains(&m), "{d}.{m}.99");
            }
        }
    }

    #[test]
    fn times() {
        assert_eq!(normalize_time("13:15 h").unwrap(), av(&[("hour", 13), ("min", 15)]));
        assert_eq!(normalize_time("8.00 h").unwrap(), av(&[("hour", 8), ("min", 0)]));
        assert_eq!(normalize_time("14 Uhr").unwrap(), av(&[("hour", 14), ("min", 0)]));
        assert_eq!(normalize_time("9:05").unwrap(), av(&[("hour", 9), ("min", 5)]));
        assert!(normalize_time("25:61 h").is_err());
        assert!(normalize_time("8.00").is_err());
        assert!(normalize_time("123:00").is_err());
    }

    #[test]
    fn numbers() {
        let chars: Vec<char> = "140.000 x".chars().collect();
        assert_eq!(recognize_number(&chars, 0), Some((7, av(&[("value", 140000)]))));
        let chars: Vec<char> = "12,5".chars().collect();
        let (len, payload) = recognize_number(&chars, 0).unwrap();
        assert_eq!(len, 4);
        assert_eq!(payload.get_str("frac"), Some("5"));
    }

    #[test]
    fn render_is_inverse() {
        for s in ["1.3.96", "21. Oktober", "3. März 1996", "1.12.1999"] {
            let p = normalize_date(s).unwrap();
            assert_eq!(normalize_date(&render_date(&p).unwrap()).unwrap(), p);
        }
        let t = normalize_time("08.05 h").unwrap();
        assert_eq!(normalize_time(&render_time(&t).unwrap()).unwrap(), t);
    }
}
