//! Round-trips an optimized protocol through its JSON wire form.

use telecheck::optimize::{decode_protocol, ProtocolParams};
use telecheck::qchannel::{check_completeness, LocalKrausProtocol};

fn main() -> telecheck::Result<()> {
    let p = decode_protocol(&ProtocolParams::bbcjpw())?;
    let text = p.to_json_string();
    let back = LocalKrausProtocol::from_json_str(&text)?;
    println!("{} bytes of JSON, {} pairs", text.len(), back.len());
    println!("completeness residual {:.3e}", check_completeness(&back));
    println!("round trip identical: {}", back == p);
    Ok(())
}
