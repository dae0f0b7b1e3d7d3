//! Minimal percent-encoding helpers for internal URLs.

/// Percent-encode everything outside RFC 3986 unreserved characters.
pub fn encode_component(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for byte in s.bytes() {
        match byte {
            b'A'..=b'Z' | b'a'..=b'z' | b'0'..=b'9' | b'-' | b'_' | b'.' | b'~' => {
                out.push(byte as char)
            }
            _ => out.push_str(&format!("%{byte:02X}")),
        }
    }
    out
}

pub fn decode_component(s: &str) -> String {
    let mut out = Vec::with_capacity(s.len());
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'%' => {
                match s.get(i + 1..i + 3).and_then(|h| u8::from_str_radix(h, 16).ok()) {
                    Some(b) => {
                        out.push(b);
                        i += 3;
                    }
                    None => {
                        out.push(b'%');
                        i += 1;
                    }
                }
            }
            b'+' => {
                out.push(b' ');
                i += 1;
            }
            b => {
                out.push(b);
                i += 1;
            }
        }
    }
    String::from_utf8_lossy(&out).into_owned()
}

/// Encode a query map into `k=v&k=v` with keys in the given order.
pub fn encode_query<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> String {
    pairs
        .into_iter()
        .map(|(k, v)| format!("{}={}", encode_component(k), encode_component(v)))
        .collect::<Vec<_>>()
        .join("&")
}

/// Split a query string into decoded (key, value) pairs, preserving order.
pub fn decode_query(query: &str) -> Vec<(String, String)> {
    query
        .split('&')
        .filter(|part| !part.is_empty())
        .map(|part| match part.split_once('=') {
            Some((k, v)) => (decode_component(k), decode_component(v)),
            None => (decode_component(part), String::new()),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for s in ["hello world", "a/b?c=d&e", "ümlaut", "100% sure", "Ancient_Rome"] {
            assert_eq!(decode_component(&encode_component(s)), s);
        }
    }

    #[test]
    fn plus_decodes_to_space() {
        assert_eq!(decode_component("a+b"), "a b");
    }

    #[test]
    fn query_round_trip() {
        let enc = encode_query([("q", "sound bar"), ("page", "2")]);
        assert_eq!(enc, "q=sound%20bar&page=2");
        assert_eq!(
            decode_query(&enc),
            vec![("q".to_string(), "sound bar".to_string()), ("page".to_string(), "2".to_string())]
        );
    }
}
