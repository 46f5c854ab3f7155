//! Numeral normalization for amounts and durations as written in judgment
//! documents: Chinese numerals (零一二两三…十百千万亿), Arabic digits,
//! fullwidth digits, grouped digits, and decimals directly in front of a
//! 万/亿 multiplier.

use alloc::string::String;
use alloc::vec::Vec;

fn digit_value(c: char) -> Option<u64> {
    Some(match c {
        '零' | '〇' => 0,
        '一' => 1,
        '二' | '两' => 2,
        '三' => 3,
        '四' => 4,
        '五' => 5,
        '六' => 6,
        '七' => 7,
        '八' => 8,
        '九' => 9,
        _ => return None,
    })
}

fn small_unit(c: char) -> Option<u64> {
    Some(match c {
        '十' => 10,
        '百' => 100,
        '千' => 1_000,
        _ => return None,
    })
}

fn section_unit(c: char) -> Option<u64> {
    Some(match c {
        '万' => 10_000,
        '亿' => 100_000_000,
        _ => return None,
    })
}

fn ascii_digit(c: char) -> Option<u64> {
    if c.is_ascii_digit() {
        Some(c as u64 - '0' as u64)
    } else {
        // Fullwidth digits ０-９.
        let v = c as u32;
        (0xFF10..=0xFF19).contains(&v).then(|| (v - 0xFF10) as u64)
    }
}

/// True for characters that can be part of a numeric expression. Separators
/// count only so the scanner can carry "1,000" across as one run; the parser
/// ignores them.
pub fn is_numeral_char(c: char) -> bool {
    ascii_digit(c).is_some()
        || digit_value(c).is_some()
        || small_unit(c).is_some()
        || section_unit(c).is_some()
}

/// Parses one numeric expression into an integer. Handles pure digit runs,
/// Chinese positional numerals, mixed forms like `3万5千`, and a decimal
/// fraction immediately before 万/亿 (`2.5万` = 25000). Returns `None` for
/// anything else.
pub fn parse_quantity(text: &str) -> Option<u64> {
    let cleaned: String = text
        .chars()
        .filter(|c| *c != ',' && *c != '，' && !c.is_whitespace())
        .collect();
    if cleaned.is_empty() {
        return None;
    }

    let mut total: u64 = 0;
    let mut section: u64 = 0;
    // Pending digits not yet bound to a unit. `digit_seen` distinguishes an
    // explicit 零 from no digit at all.
    let mut digit: u64 = 0;
    let mut digit_seen = false;
    // Decimal tail collected after '.', only meaningful before 万/亿.
    let mut frac: u64 = 0;
    let mut frac_digits: u32 = 0;
    let mut in_fraction = false;
    let mut any = false;

    let chars: Vec<char> = cleaned.chars().collect();
    for &c in chars.iter() {
        if let Some(d) = ascii_digit(c) {
            if in_fraction {
                frac = frac.checked_mul(10)?.checked_add(d)?;
                frac_digits += 1;
            } else {
                digit = digit.checked_mul(10)?.checked_add(d)?;
                digit_seen = true;
            }
            any = true;
        } else if c == '.' || c == '．' {
            if !digit_seen || in_fraction {
                return None;
            }
            in_fraction = true;
        } else if let Some(d) = digit_value(c) {
            if in_fraction {
                return None;
            }
            // 零 acts as a group separator: drop any pending digit.
            if d == 0 {
                digit = 0;
                digit_seen = false;
            } else {
                digit = d;
                digit_seen = true;
            }
            any = true;
        } else if let Some(unit) = small_unit(c) {
            if in_fraction {
                return None;
            }
            // A bare 十 means one ten: 十六 = 16.
            let factor = if digit_seen { digit } else { 1 };
            section = section.checked_add(factor.checked_mul(unit)?)?;
            digit = 0;
            digit_seen = false;
            any = true;
        } else if let Some(unit) = section_unit(c) {
            let mut value = section.checked_add(digit)?.checked_mul(unit)?;
            if in_fraction {
                let scale = 10u64.checked_pow(frac_digits)?;
                let frac_part = frac.checked_mul(unit)? / scale;
                value = value.checked_add(frac_part)?;
                in_fraction = false;
                frac = 0;
                frac_digits = 0;
            }
            total = total.checked_add(value)?;
            section = 0;
            digit = 0;
            digit_seen = false;
            any = true;

        } else {
            return None;
        }
    }
    if in_fraction {
        // A trailing fraction without a 万/亿 multiplier is not an integer.
        return None;
    }
    if !any {
        return None;
    }
    Some(total.checked_add(section)?.checked_add(digit)?)
}

/// A monetary amount found in text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Amount {
    pub yuan: u64,
    /// Byte offset of the start of the numeric expression.
    pub position: usize,
}

/// Scans a clause for 元-denominated amounts, tolerating an optional 人民币
/// prefix and a 万/亿 multiplier before 元. Runs that anchor on 元 but fail
/// to parse are returned separately for diagnostics.
pub fn extract_amounts(text: &str) -> (Vec<Amount>, Vec<String>) {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut amounts = Vec::new();
    let mut malformed = Vec::new();
    for (idx, &(_, c)) in chars.iter().enumerate() {
        if c != '元' {
            continue;
        }
        // Walk back over numeral characters, separators and a decimal point.
        let mut start = idx;
        while start > 0 {
            let prev = chars[start - 1].1;
            if is_numeral_char(prev) || prev == ',' || prev == '，' || prev == '.' || prev == '．'
            {
                start -= 1;
            } else {
                break;
            }
        }
        if start == idx {
            continue; // 元 with no number in front, e.g. 元旦.
        }
        // A separator or dot glued to the front is not part of the number.
        while start < idx
            && matches!(chars[start].1, ',' | '，' | '.' | '．')
        {
            start += 1;
        }
        let run_start_byte = chars[start].0;
        let run_end_byte = chars[idx].0;
        let run = &text[run_start_byte..run_end_byte];
        match parse_quantity(run) {
            Some(yuan) => amounts.push(Amount {
                yuan,
                position: run_start_byte,
            }),
            None => malformed.push(String::from(run)),
        }
    }
    (amounts, malformed)
}

/// Reads a duration in months starting at byte offset `from`, directly after
/// a punishment keyword: `<num>年`, `<num>个月`, `<num>月`, or a year part
/// followed by a month part (一年零六个月 = 18).
pub fn scan_duration_months(text: &str, from: usize) -> Option<u32> {
    let tail = &text[from..];
    let chars: Vec<char> = tail.chars().collect();
    let mut pos = 0usize;
    let mut months: u64 = 0;
    let mut matched = false;

    for _ in 0..2 {
        let run_start = pos;
        let mut run_end = pos;
        while run_end < chars.len() && (is_numeral_char(chars[run_end]) || chars[run_end] == '.')
        {
            run_end += 1;
        }
        if run_end == run_start {
            break;
        }
        let run: String = chars[run_start..run_end].iter().collect();
        let value = parse_quantity(&run)?;
        // Unit.
        if run_end < chars.len() && chars[run_end] == '年' {
            months = months.checked_add(value.checked_mul(12)?)?;
            pos = run_end + 1;
            matched = true;
            // 零 between year and month parts, as in 一年零六个月.
            if pos < chars.len() && chars[pos] == '零' {
                pos += 1;
            }
        } else if run_end < chars.len() && chars[run_end] == '个' {
            if run_end + 1 < chars.len() && chars[run_end + 1] == '月' {
                months = months.checked_add(value)?;
                matched = true;
            }
            break;
        } else if run_end < chars.len() && chars[run_end] == '月' {
            months = months.checked_add(value)?;
            matched = true;
            break;
        } else {
            break;
        }
    }
    if matched && months > 0 {
        u32::try_from(months).ok()
    } else {
        None
    }
}
