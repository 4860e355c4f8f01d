package org.example.geo;

public interface Shape {
    double area();

    String name();

    default String describe() {
        return name() + " with area " + area();
    }

    static Shape unit() {
        return new Shape() {
            public double area() { return 1.0; }
            public String name() { return "unit"; }
        };
    }
}
