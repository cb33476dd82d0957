//! Parse a model from XML, report validation problems, fix them and print
//! the canonical JSON form.

use ecoloom::model::{parse_model, serialize_model, validate_model, Format};

const DOCUMENT: &str = r#"<model>
  <name>Pond</name>
  <components>
    <component>
      <id>duck</id><display_name>Duck</display_name><kind>biotic</kind>
      <params><starting_population>30</starting_population><offspring_count>4</offspring_count>
        <reproductive_interval>0</reproductive_interval><body_mass>1.2</body_mass></params>
    </component>
    <component>
      <id>water</id><display_name>Water</display_name><kind>abiotic</kind>
      <params><amount>5000</amount><minimum_amount>4000</minimum_amount></params>
    </component>
  </components>
  <relationships>
    <relationship>
      <id>drink</id><kind>destroys</kind><source>duck</source><target>water</target>
      <params><destruction_rate>0.01</destruction_rate></params>
    </relationship>
  </relationships>
</model>"#;

fn main() {
    let mut model = parse_model(DOCUMENT, Format::Xml).expect("well-formed");
    let report = validate_model(&model);
    print!("{report}");

    let duck = model.component_mut("duck").unwrap();
    if let ecoloom::model::ComponentParams::Biotic(p) = &mut duck.params {
        p.reproductive_interval = Some(12);
    }
    print!("{}", validate_model(&model));
    println!("{}", serialize_model(&model, Format::Json));
}
