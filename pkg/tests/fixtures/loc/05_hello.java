package demo;

import java.util.List;

public class Hello {
    public static void main(String[] args) {
        System.out.println("hi");
    }
}
