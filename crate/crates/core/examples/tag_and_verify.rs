//! Key generation, tagging, the byte wire format, and verification.

use rmacode::auth::{read_key_file, write_key_file};
use rmacode::{decode_message, encode_message, generate_tag, sample_key, verify, AuthConfig, BitVector, Message};

fn main() -> rmacode::Result<()> {
    let config = AuthConfig::rm(4, 1, 4, 3)?;
    let key = sample_key(&config, 7);
    let key_file = write_key_file(&config, &key);
    print!("{key_file}");
    let (_, key) = read_key_file(&key_file)?;

    let source: BitVector = "1011".parse().unwrap();
    let tag = generate_tag(&config, &source, &key)?;
    let wire = encode_message(&Message::new(source, tag));
    println!("message bytes: {wire:02x?}");

    let received = decode_message(&wire, &config)?;
    println!("accepted: {}", verify(&config, &received, &key)?);

    let mut forged = received.clone();
    forged.tag.flip(0);
    println!("tag bit flipped, accepted: {}", verify(&config, &forged, &key)?);
    Ok(())
}
