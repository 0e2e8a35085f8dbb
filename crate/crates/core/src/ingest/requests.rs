//! Request files: one JSON object per line.
//!
//! ```text
//! {"request_id":"q1","service_id":"tv","attribute":"channel","value":"Ch3","start":"20:00:00","end":"20:30:00","location":"living room","resident":"R1"}
//! ```

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AttributeValue, Location, ResidentId, ServiceId, ServiceRequest, TimeOfDay, TimeOfDayInterval};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RequestLine {
    request_id: String,
    service_id: String,
    attribute: String,
    value: serde_json::Value,
    start: String,
    end: String,
    location: String,
    resident: String,
}

fn request_from_line(line: RequestLine) -> std::result::Result<ServiceRequest, String> {
    let value = match line.value {
        serde_json::Value::String(s) => AttributeValue::Categorical(s),
        serde_json::Value::Number(n) => AttributeValue::Numeric(n.as_f64().ok_or("numeric value out of range")?),
        other => return Err(format!("value must be a string or number, got {other}")),
    };
    let start: TimeOfDay = line.start.parse().map_err(|e: Error| e.to_string())?;
    let end: TimeOfDay = line.end.parse().map_err(|e: Error| e.to_string())?;
    let interval = TimeOfDayInterval::new(start, end).map_err(|e| e.to_string())?;
    if line.request_id.is_empty() || line.resident.is_empty() || line.service_id.is_empty() {
        return Err("request_id, service_id and resident must be non-empty".into());
    }
    Ok(ServiceRequest {
        request_id: line.request_id,
        service_id: ServiceId::new(line.service_id),
        attribute: line.attribute,
        value,
        interval,
        location: Location::new(&line.location),
        resident: ResidentId::new(line.resident),
    })
}

pub fn parse_requests_reader<R: Read>(reader: R, source: &Path) -> Result<Vec<ServiceRequest>> {
    let mut out = Vec::new();
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let lineno = idx as u64 + 1;
        let line = line.map_err(|e| Error::io(source, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RequestLine =
            serde_json::from_str(&line).map_err(|e| Error::parse(source, lineno, e.to_string()))?;
        out.push(request_from_line(raw).map_err(|m| Error::parse(source, lineno, m))?);
    }
    let mut ids: Vec<&str> = out.iter().map(|r| r.request_id.as_str()).collect();
    ids.sort_unstable();
    if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::parse(source, 0, format!("duplicate request id `{}`", w[0])));
    }
    Ok(out)
}

pub fn parse_requests(path: &Path) -> Result<Vec<ServiceRequest>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_requests_reader(file, path)
}

pub(crate) fn request_json(r: &ServiceRequest) -> serde_json::Value {
    let value = match &r.value {
        AttributeValue::Numeric(x) => serde_json::json!(x),
        other => serde_json::Value::String(other.label()),
    };
    serde_json::json!({
        "request_id": r.request_id,
        "service_id": r.service_id,
        "attribute": r.attribute,
        "value": value,
        "start": r.interval.start().to_string(),
        "end": r.interval.end().to_string(),
        "location": r.location,
        "resident": r.resident,
    })
}

pub fn write_requests<W: Write>(requests: &[ServiceRequest], mut out: W) -> std::io::Result<()> {
    for r in requests {
        writeln!(out, "{}", request_json(r))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_string_and_numeric_values() {
        let text = r#"{"request_id":"q1","service_id":"tv","attribute":"channel","value":"Ch3","start":"20:00:00","end":"20:30:00","location":"Living Room","resident":"R1"}

{"request_id":"q2","service_id":"ac","attribute":"temperature","value":22.5,"start":"23:00:00","end":"01:00:00","location":"bedroom","resident":"R2"}
"#;
        let reqs = parse_requests_reader(text.as_bytes(), Path::new("r.jsonl")).unwrap();
        assert_eq!(reqs.len(), 2);
        assert_eq!(reqs[0].value, AttributeValue::from("Ch3"));
        assert_eq!(reqs[0].location.as_str(), "living room");
        assert_eq!(reqs[1].value, AttributeValue::Numeric(22.5));
        assert!(reqs[1].interval.wraps());

        let mut buf = Vec::new();
        write_requests(&reqs, &mut buf).unwrap();
        assert_eq!(parse_requests_reader(buf.as_slice(), Path::new("x")).unwrap(), reqs);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = "{\"request_id\":\"q1\"}\n";
        let err = parse_requests_reader(text.as_bytes(), Path::new("r.jsonl")).unwrap_err();
        assert!(err.to_string().starts_with("r.jsonl:1:"), "{err}");
        let bad_time = r#"{"request_id":"q1","service_id":"tv","attribute":"channel","value":"Ch3","start":"20:00","end":"20:00","location":"lr","resident":"R1"}"#;
        assert!(parse_requests_reader(bad_time.as_bytes(), Path::new("r")).is_err());
        let dup = format!("{}\n{}\n", bad_time.replace("\"end\":\"20:00\"", "\"end\":\"21:00\""), bad_time.replace("\"end\":\"20:00\"", "\"end\":\"21:00\""));
        assert!(parse_requests_reader(dup.as_bytes(), Path::new("r")).is_err());
    }
}
