//! Invariants every template must satisfy with respect to its pattern and
//! the item stream it was built from.

use ie_core::combiner::{EntryKind, Fcp, ItemStream, Template};

/// Slot counts stay within `max`; a complete template also meets every
/// necessary `min`.
pub fn bounds(template: &Template, fcp: &Fcp) -> Result<(), String> {
    for set in &fcp.sets {
        for entry in &set.entries {
            let n = template.slots.get(&entry.slot).map_or(0, Vec::len);
            if n > entry.max {
                return Err(format!("slot {} holds {n} > max {}", entry.slot, entry.max));
            }
            if template.complete && set.necessary && n < entry.min {
                return Err(format!("complete template with slot {} at {n} < min {}", entry.slot, entry.min));
            }
        }
    }
    for slot in template.slots.keys() {
        if !fcp.sets.iter().any(|s| s.entries.iter().any(|e| &e.slot == slot)) {
            return Err(format!("slot {slot} is not declared"));
        }
    }
    Ok(())
}

/// No slot item lies beyond a stop marker or another anchor, seen from the
/// template's anchor.
pub fn locality(template: &Template, fcp: &Fcp, stream: &ItemStream) -> Result<(), String> {
    let anchor = template.anchor.position;
    for item in template.items() {
        let (lo, hi) = if item.end <= anchor {
            (item.end, anchor)
        } else {
            (anchor + 1, item.start)
        };
        for e in stream.entries() {
            if e.start < lo || e.end > hi || e.start >= e.end {
                continue;
            }
            let blocks = match &e.kind {
                EntryKind::Anchor(_) => true,
                EntryKind::Punct(p) | EntryKind::Text(p) => fcp.stop_markers.contains(p),
                _ => false,
            };
            if blocks {
                return Err(format!(
                    "item {}..{} collected across {:?} at {}",
                    item.start, item.end, e.kind, e.start
                ));
            }
        }
    }
    Ok(())
}
