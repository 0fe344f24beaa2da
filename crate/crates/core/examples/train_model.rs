//! Collects labelled pricing problems on small graphs, trains the SVM and
//! compares the new weights with the built-in ones.

use fraccol::colgen::{Backend, CgConfig, Selection};
use fraccol::graph::families;
use fraccol::mlmodel::{collect_training_data, train_svm, Model, SvmConfig, TrainingSet};

fn main() -> fraccol::Result<()> {
    let mut data = TrainingSet::default();
    for name in ["myciel4", "queen6_6", "2-Insertions_3"] {
        let g = families::by_name(name).expect("known family");
        let cfg = CgConfig::new(Backend::Mlph, Selection::AddPartial, 1);
        let part = collect_training_data(&g, name, &cfg, 5, 25)?;
        println!("{name}: {} rows", part.len());
        data.extend(part);
    }
    let (svm, report) = train_svm(&data, &SvmConfig::default())?;
    println!("trained  {:?} b={:.4}", svm.weights, svm.intercept);
    let def = Model::default();
    println!("built-in {:?} b={:.4}", def.svm.weights, def.svm.intercept);
    println!("accuracy {:.3}, {} positives, {} negatives", report.accuracy, report.positives, report.negatives);
    let model = Model { svm, ..def };
    print!("{}", model.to_json());
    Ok(())
}
