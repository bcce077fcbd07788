# Package marker for solitonlab project
