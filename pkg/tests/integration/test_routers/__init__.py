# Package initialization 
