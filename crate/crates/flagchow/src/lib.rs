//! Catalog files, report documents, the acceptance suite and the command-line
//! front end for [`flagchow_core`].

pub mod catalog_file;
pub mod cli;
pub mod report;
pub mod suite;
